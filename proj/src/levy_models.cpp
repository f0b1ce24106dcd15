#include "capalarm/levy_models.hpp"

#include "capalarm/errors.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

namespace capalarm {

namespace {

constexpr double kPoleRadius = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_all(std::initializer_list<double> values) {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

// Upper incomplete gamma Gamma(s, z) for non-integer s < 0 (and any s > 0),
// reduced to a positive parameter through
//   Gamma(s, z) = (Gamma(s + 1, z) - z^s e^{-z}) / s.
double upper_incomplete_gamma(double s, double z) {
    if (s > 0.0) return boost::math::tgamma(s, z);
    const double upper = upper_incomplete_gamma(s + 1.0, z);
    return (upper - std::pow(z, s) * std::exp(-z)) / s;
}

} // namespace

void DejdParams::validate() const {
    detail::require(finite_all({mu, sigma, lambda, p, eta_minus, eta_plus}),
                    "DejdParams: all fields must be finite");
    detail::require(sigma > 0.0, "DejdParams: sigma must be > 0");
    detail::require(lambda > 0.0, "DejdParams: lambda must be > 0");
    detail::require(p >= 0.0 && p <= 1.0, "DejdParams: p must lie in [0, 1]");
    detail::require(eta_minus > 0.0, "DejdParams: eta_minus must be > 0");
    detail::require(eta_plus > 0.0, "DejdParams: eta_plus must be > 0");
}

void validate(const SpectralNegModel& model) {
    std::visit(overloaded{
                   [](const ExpJumpCPP& m) {
                       detail::require(finite_all({m.mu, m.sigma, m.lambda, m.eta}),
                                       "ExpJumpCPP: all fields must be finite");
                       detail::require(m.sigma >= 0.0, "ExpJumpCPP: sigma must be >= 0");
                       detail::require(m.lambda > 0.0, "ExpJumpCPP: lambda must be > 0");
                       detail::require(m.eta > 0.0, "ExpJumpCPP: eta must be > 0");
                       detail::require(m.sigma > 0.0 || m.mu > 0.0,
                                       "ExpJumpCPP: mu must be > 0 when sigma = 0");
                   },
                   [](const TemperedStable& m) {
                       detail::require(finite_all({m.c, m.bigC, m.lam, m.alpha}),
                                       "TemperedStable: all fields must be finite");
                       detail::require(m.bigC > 0.0, "TemperedStable: bigC must be > 0");
                       detail::require(m.lam > 0.0, "TemperedStable: lam must be > 0");
                       detail::require(m.alpha < 2.0, "TemperedStable: alpha must be < 2");
                       detail::require(m.alpha != 0.0,
                                       "TemperedStable: alpha = 0 is the VarianceGamma model");
                       detail::require(m.alpha != 1.0, "TemperedStable: alpha = 1 is not supported");
                       if (m.alpha < 1.0) {
                           const double drift =
                               m.c + m.bigC * std::tgamma(1.0 - m.alpha) * std::pow(m.lam, m.alpha - 1.0);
                           detail::require(drift > 0.0,
                                           "TemperedStable: bounded variation requires positive drift");
                       }
                   },
                   [](const VarianceGamma& m) {
                       detail::require(finite_all({m.c, m.bigC, m.lam}),
                                       "VarianceGamma: all fields must be finite");
                       detail::require(m.bigC > 0.0, "VarianceGamma: bigC must be > 0");
                       detail::require(m.lam > 0.0, "VarianceGamma: lam must be > 0");
                       detail::require(m.c + m.bigC / m.lam > 0.0,
                                       "VarianceGamma: bounded variation requires positive drift");
                   },
               },
               model);
}

std::string model_name(const SpectralNegModel& model) {
    return std::visit(overloaded{
                          [](const ExpJumpCPP&) { return std::string("ExpJumpCPP"); },
                          [](const TemperedStable&) { return std::string("TemperedStable"); },
                          [](const VarianceGamma&) { return std::string("VarianceGamma"); },
                      },
                      model);
}

bool has_bounded_variation(const SpectralNegModel& model) {
    return std::visit(overloaded{
                          [](const ExpJumpCPP& m) { return m.sigma == 0.0; },
                          [](const TemperedStable& m) { return m.alpha < 1.0; },
                          [](const VarianceGamma&) { return true; },
                      },
                      model);
}

double gaussian_sigma(const SpectralNegModel& model) {
    if (const auto* m = std::get_if<ExpJumpCPP>(&model)) return m->sigma;
    return 0.0;
}

double bounded_variation_drift(const SpectralNegModel& model) {
    if (!has_bounded_variation(model))
        throw DomainError("bounded_variation_drift: " + model_name(model) + " has unbounded variation");
    return std::visit(overloaded{
                          [](const ExpJumpCPP& m) { return m.mu; },
                          [](const TemperedStable& m) {
                              return m.c + m.bigC * std::tgamma(1.0 - m.alpha) * std::pow(m.lam, m.alpha - 1.0);
                          },
                          [](const VarianceGamma& m) { return m.c + m.bigC / m.lam; },
                      },
                      model);
}

double levy_total_mass(const SpectralNegModel& model) {
    return std::visit(overloaded{
                          [](const ExpJumpCPP& m) { return m.lambda; },
                          [](const TemperedStable& m) {
                              if (m.alpha < 0.0) return m.bigC * std::pow(m.lam, m.alpha) * std::tgamma(-m.alpha);
                              return std::numeric_limits<double>::infinity();
                          },
                          [](const VarianceGamma&) { return std::numeric_limits<double>::infinity(); },
                      },
                      model);
}

double levy_density(const SpectralNegModel& model, double x) {
    if (!(x > 0.0)) throw DomainError("levy_density: x must be > 0");
    return std::visit(overloaded{
                          [x](const ExpJumpCPP& m) { return m.lambda * m.eta * std::exp(-m.eta * x); },
                          [x](const TemperedStable& m) {
                              return m.bigC * std::exp(-m.lam * x) / std::pow(x, 1.0 + m.alpha);
                          },
                          [x](const VarianceGamma& m) { return m.bigC * std::exp(-m.lam * x) / x; },
                      },
                      model);
}

double levy_tail(const SpectralNegModel& model, double x) {
    if (!(x > 0.0)) throw DomainError("levy_tail: x must be > 0 (the tail at 0 may be infinite)");
    return std::visit(overloaded{
                          [x](const ExpJumpCPP& m) { return m.lambda * std::exp(-m.eta * x); },
                          [x](const TemperedStable& m) {
                              // Pi(x, inf) = C lam^alpha Gamma(-alpha, lam x)
                              return m.bigC * std::pow(m.lam, m.alpha) * upper_incomplete_gamma(-m.alpha, m.lam * x);
                          },
                          [x](const VarianceGamma& m) { return m.bigC * boost::math::expint(1, m.lam * x); },
                      },
                      model);
}

double laplace_exponent(const DejdParams& params, double beta) {
    const auto& m = params;
    double jump = -1.0;
    if (m.p > 0.0) {
        if (std::abs(beta + m.eta_minus) < kPoleRadius)
            throw DomainError("laplace_exponent: beta is at the pole -eta_minus");
        jump += m.p * m.eta_minus / (m.eta_minus + beta);
    }
    if (m.p < 1.0) {
        if (std::abs(beta - m.eta_plus) < kPoleRadius)
            throw DomainError("laplace_exponent: beta is at the pole eta_plus");
        jump += (1.0 - m.p) * m.eta_plus / (m.eta_plus - beta);
    }
    return m.mu * beta + 0.5 * m.sigma * m.sigma * beta * beta + m.lambda * jump;
}

double laplace_exponent_derivative(const DejdParams& params, double beta) {
    const auto& m = params;
    double jump = 0.0;
    if (m.p > 0.0) {
        if (std::abs(beta + m.eta_minus) < kPoleRadius)
            throw DomainError("laplace_exponent_derivative: beta is at the pole -eta_minus");
        const double d = m.eta_minus + beta;
        jump -= m.p * m.eta_minus / (d * d);
    }
    if (m.p < 1.0) {
        if (std::abs(beta - m.eta_plus) < kPoleRadius)
            throw DomainError("laplace_exponent_derivative: beta is at the pole eta_plus");
        const double d = m.eta_plus - beta;
        jump += (1.0 - m.p) * m.eta_plus / (d * d);
    }
    return m.mu + m.sigma * m.sigma * beta + m.lambda * jump;
}

double laplace_exponent(const SpectralNegModel& model, double beta) {
    return std::visit(
        overloaded{
            [beta](const ExpJumpCPP& m) {
                if (std::abs(beta + m.eta) < kPoleRadius)
                    throw DomainError("laplace_exponent: beta is at the pole -eta");
                return m.mu * beta + 0.5 * m.sigma * m.sigma * beta * beta + m.lambda * (m.eta / (m.eta + beta) - 1.0);
            },
            [beta](const TemperedStable& m) {
                if (!(beta > -m.lam))
                    throw DomainError("laplace_exponent: TemperedStable requires beta > -lam");
                const double ratio = beta / m.lam;
                return m.c * beta + m.bigC * std::pow(m.lam, m.alpha) * std::tgamma(-m.alpha) *
                                        (std::pow(1.0 + ratio, m.alpha) - 1.0 - m.alpha * ratio);
            },
            [beta](const VarianceGamma& m) {
                if (!(beta > -m.lam))
                    throw DomainError("laplace_exponent: VarianceGamma requires beta > -lam");
                const double ratio = beta / m.lam;
                return m.c * beta + m.bigC * (ratio - std::log1p(ratio));
            },
        },
        model);
}

std::complex<double> laplace_exponent(const SpectralNegModel& model, std::complex<double> beta) {
    using C = std::complex<double>;
    return std::visit(
        overloaded{
            [beta](const ExpJumpCPP& m) -> C {
                return m.mu * beta + 0.5 * m.sigma * m.sigma * beta * beta + m.lambda * (m.eta / (m.eta + beta) - 1.0);
            },
            [beta](const TemperedStable& m) -> C {
                const C ratio = beta / m.lam;
                return m.c * beta + m.bigC * std::pow(m.lam, m.alpha) * std::tgamma(-m.alpha) *
                                        (std::pow(1.0 + ratio, m.alpha) - 1.0 - m.alpha * ratio);
            },
            [beta](const VarianceGamma& m) -> C {
                const C ratio = beta / m.lam;
                return m.c * beta + m.bigC * (ratio - std::log(1.0 + ratio));
            },
        },
        model);
}

double laplace_exponent_derivative(const SpectralNegModel& model, double beta) {
    return std::visit(
        overloaded{
            [beta](const ExpJumpCPP& m) {
                if (std::abs(beta + m.eta) < kPoleRadius)
                    throw DomainError("laplace_exponent_derivative: beta is at the pole -eta");
                const double d = m.eta + beta;
                return m.mu + m.sigma * m.sigma * beta - m.lambda * m.eta / (d * d);
            },
            [beta](const TemperedStable& m) {
                if (!(beta > -m.lam))
                    throw DomainError("laplace_exponent_derivative: TemperedStable requires beta > -lam");
                return m.c + m.bigC * std::pow(m.lam, m.alpha - 1.0) * std::tgamma(-m.alpha) * m.alpha *
                                 (std::pow(1.0 + beta / m.lam, m.alpha - 1.0) - 1.0);
            },
            [beta](const VarianceGamma& m) {
                if (!(beta > -m.lam))
                    throw DomainError("laplace_exponent_derivative: VarianceGamma requires beta > -lam");
                return m.c + m.bigC * (1.0 / m.lam - 1.0 / (m.lam + beta));
            },
        },
        model);
}

double overall_drift(const DejdParams& params) {
    return params.mu + params.lambda * (-params.p / params.eta_minus + (1.0 - params.p) / params.eta_plus);
}

double overall_drift(const SpectralNegModel& model) {
    return laplace_exponent_derivative(model, 0.0);
}

double penalty_value(const Penalty& h, double x) {
    return std::visit(overloaded{
                          [](const Constant1&) { return 1.0; },
                          [x](const ExpUtility& e) {
                              if (std::isinf(e.rho)) return x > 0.0 ? 1.0 : 0.0;
                              return -std::expm1(-e.rho * x);
                          },
                          [x](const CustomPenalty& c) { return c.h(x); },
                      },
                      h);
}

double penalty_derivative(const Penalty& h, double x) {
    return std::visit(overloaded{
                          [](const Constant1&) { return 0.0; },
                          [x](const ExpUtility& e) { return std::isinf(e.rho) ? 0.0 : e.rho * std::exp(-e.rho * x); },
                          [x](const CustomPenalty& c) {
                              if (c.dh) return c.dh(x);
                              constexpr double step = 1e-6;
                              return (c.h(x + step) - c.h(x - step)) / (2.0 * step);
                          },
                      },
                      h);
}

std::string penalty_name(const Penalty& h) {
    return std::visit(overloaded{
                          [](const Constant1&) { return std::string("Constant1"); },
                          [](const ExpUtility&) { return std::string("ExpUtility"); },
                          [](const CustomPenalty&) { return std::string("Custom"); },
                      },
                      h);
}

void CostSpec::validate() const {
    detail::require(std::isfinite(q) && q >= 0.0, "CostSpec: q must be >= 0");
    detail::require(std::isfinite(gamma) && gamma > 0.0, "CostSpec: gamma must be > 0");
    if (const auto* e = std::get_if<ExpUtility>(&h))
        detail::require(e->rho > 0.0 && !std::isnan(e->rho), "CostSpec: rho must be > 0");
    if (const auto* c = std::get_if<CustomPenalty>(&h))
        detail::require(static_cast<bool>(c->h), "CostSpec: custom penalty needs an evaluator");
}

ShiftedProblem geometric_shift(double a, double x0, const CostSpec& spec) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("geometric_shift: barrier a must be > 0");
    const double log_a = std::log(a);
    ShiftedProblem out{x0 - log_a, spec};
    if (a == 1.0 || std::holds_alternative<Constant1>(spec.h)) return out;

    const Penalty base = spec.h;
    CustomPenalty shifted;
    shifted.h = [base, a](double x) { return penalty_value(base, a * std::exp(x)); };
    shifted.dh = [base, a](double x) {
        const double y = a * std::exp(x);
        return penalty_derivative(base, y) * y;
    };
    out.cost.h = std::move(shifted);
    return out;
}

} // namespace capalarm
