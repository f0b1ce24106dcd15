#include "capalarm/scale_fn.hpp"

#include "capalarm/errors.hpp"
#include "capalarm/root_finding.hpp"
#include "capalarm/talbot.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace capalarm {

namespace {

// Roots are polished to full double precision: the residue self-check and
// the cancellations in the exponential-sum formulas need them exact.
constexpr double kRootTol = 1e-300;

double root_between_pole_and(const SpectralNegModel& model, double q, double pole, double far, int side) {
    // side = +1: root in (pole, far) with far > pole; psi -> +inf at pole+.
    // side = -1: root in (far, pole) with far < pole; psi -> -inf at pole-.
    auto g = [&](double b) { return laplace_exponent(model, b) - q; };
    double offset = 0.5 * std::abs(far - pole);
    double near = pole;
    for (int k = 0; k < 60; ++k, offset *= 0.5) {
        near = pole + side * offset;
        const double value = g(near);
        if (side > 0 ? value > 0.0 : value < 0.0) break;
        if (k == 59) throw NumericFailure("scale function: no sign change next to the jump pole");
    }
    return side > 0 ? bisect(g, near, far, kRootTol) : bisect(g, far, near, kRootTol);
}

double expand_below(const SpectralNegModel& model, double q, double start) {
    double width = 1.0;
    for (int k = 0; k < kMaxBracketExpansions; ++k, width *= 2.0)
        if (laplace_exponent(model, start - width) - q > 0.0) return start - width;
    throw NumericFailure("scale function: lower root bracket expansion failed");
}

} // namespace

std::string to_string(ScaleMethod method) {
    return method == ScaleMethod::AnalyticExponentialSum ? "AnalyticExponentialSum" : "NumericInversion";
}

ScaleContext::ScaleContext(const SpectralNegModel& model, double q, ScaleOptions options)
    : model_(model),
      q_(q),
      method_(std::holds_alternative<ExpJumpCPP>(model) && !options.force_numeric ? ScaleMethod::AnalyticExponentialSum
                                                                                  : ScaleMethod::NumericInversion),
      bounded_variation_(has_bounded_variation(model)),
      nodes_(options.talbot_nodes) {
    validate(model_);
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("ScaleContext: q must be > 0");
    if (nodes_ < 8) throw DomainError("ScaleContext: at least 8 Talbot nodes are required");

    zeta_ = find_zeta(model_, q_, kRootTol);
    psi_prime_zeta_ = laplace_exponent_derivative(model_, zeta_);
    w_zero_ = bounded_variation_ ? 1.0 / bounded_variation_drift(model_) : 0.0;

    if (method_ != ScaleMethod::AnalyticExponentialSum) return;

    const auto& m = std::get<ExpJumpCPP>(model_);
    std::vector<double> roots{zeta_};
    roots.push_back(root_between_pole_and(model_, q_, -m.eta, 0.0, +1));
    if (m.sigma > 0.0) roots.push_back(root_between_pole_and(model_, q_, -m.eta, expand_below(model_, q_, -m.eta), -1));

    double sum = 0.0, magnitude = 0.0;
    for (double r : roots) {
        const double coef = 1.0 / laplace_exponent_derivative(model_, r);
        terms_.push_back({r, coef});
        sum += coef;
        magnitude += std::abs(coef);
    }
    if (std::abs(sum - w_zero_) > 1e-10 * std::max(1.0, magnitude)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "ScaleContext: residue sum " << sum << " does not reproduce W(0) = " << w_zero_;
        throw NumericFailure(msg.str());
    }
}

double ScaleContext::W_derivative_at_zero() const {
    const double sigma = gaussian_sigma(model_);
    if (sigma > 0.0) return 2.0 / (sigma * sigma);
    const double mass = levy_total_mass(model_);
    if (!std::isfinite(mass)) return std::numeric_limits<double>::infinity();
    const double mu = bounded_variation_drift(model_);
    return (q_ + mass) / (mu * mu);
}

double ScaleContext::W(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return w_zero_;
    if (method_ == ScaleMethod::AnalyticExponentialSum) {
        double w = 0.0;
        for (const auto& t : terms_) w += t.coef * std::exp(t.root * x);
        return w;
    }
    return std::exp(zeta_ * x) * W_scaled_numeric(x);
}

double ScaleContext::W_scaled(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return w_zero_;
    if (method_ == ScaleMethod::AnalyticExponentialSum) {
        double w = 0.0;
        for (const auto& t : terms_) w += t.coef * std::exp((t.root - zeta_) * x);
        return w;
    }
    return W_scaled_numeric(x);
}

double ScaleContext::W_excess(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return w_zero_ - 1.0 / psi_prime_zeta_;
    if (method_ == ScaleMethod::AnalyticExponentialSum) {
        double w = 0.0;
        for (std::size_t i = 1; i < terms_.size(); ++i) w += terms_[i].coef * std::exp(terms_[i].root * x);
        return w;
    }
    // The transform 1/(psi(b) - q) - 1/(psi'(zeta)(b - zeta)) has a removable
    // singularity at zeta. The real Talbot node 2M/(5x) is kept away from it
    // by adding nodes.
    int nodes = nodes_;
    while (std::abs(2.0 * nodes / (5.0 * x) - zeta_) < 0.05 * zeta_) ++nodes;
    auto transform = [this](std::complex<double> b) {
        return 1.0 / (laplace_exponent(model_, b) - q_) - 1.0 / (psi_prime_zeta_ * (b - zeta_));
    };
    const double value = talbot_invert(transform, x, nodes);
    if (!std::isfinite(value)) throw NumericFailure("ScaleContext: Laplace inversion produced a non-finite value");
    return value;
}

double ScaleContext::Z(double x) const {
    if (x <= 0.0) return 1.0;
    if (method_ == ScaleMethod::AnalyticExponentialSum) {
        double integral = 0.0;
        for (const auto& t : terms_) integral += t.coef * std::expm1(t.root * x) / t.root;
        return 1.0 + q_ * integral;
    }
    return std::exp(zeta_ * x) * Z_scaled_numeric(x);
}

double ScaleContext::W_scaled_numeric(double x) const {
    auto transform = [this](std::complex<double> b) {
        return 1.0 / (laplace_exponent(model_, b + zeta_) - q_);
    };
    const double value = talbot_invert(transform, x, nodes_);
    if (!std::isfinite(value)) throw NumericFailure("ScaleContext: Laplace inversion produced a non-finite value");
    return value;
}

double ScaleContext::Z_scaled_numeric(double x) const {
    // int e^{-s x} Z(x) dx = psi(s) / (s (psi(s) - q)), shifted by zeta.
    auto transform = [this](std::complex<double> b) {
        const auto s = b + zeta_;
        const auto psi = laplace_exponent(model_, s);
        return psi / (s * (psi - q_));
    };
    const double value = talbot_invert(transform, x, nodes_);
    if (!std::isfinite(value)) throw NumericFailure("ScaleContext: Laplace inversion produced a non-finite value");
    return value;
}

} // namespace capalarm
