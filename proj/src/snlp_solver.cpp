#include "capalarm/snlp_solver.hpp"

#include "capalarm/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace capalarm {

namespace {

constexpr double kQuadTol = 1e-11;
constexpr double kTailMass = 1e-12;
constexpr double kPhiFloor = 1e-8;

const ExpJumpCPP* analytic_model(const ScaleContext& ctx) {
    if (ctx.method() != ScaleMethod::AnalyticExponentialSum) return nullptr;
    return &std::get<ExpJumpCPP>(ctx.model());
}

template <class F>
double integrate(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> rule;
    const double value = rule.integrate(f, a, b, kQuadTol);
    if (!std::isfinite(value)) throw NumericFailure("quadrature produced a non-finite value");
    return value;
}

// e^{zeta t} (W_zeta(s) - W_zeta(t)) for 0 <= t <= s, as a function of t.
// Written through W_excess, which stays bounded, this avoids subtracting two
// values close to 1/psi'(zeta) and multiplying the rounding by e^{zeta t}.
class ResolventCore {
public:
    ResolventCore(const ScaleContext& ctx, double s) : ctx_(ctx), s_(s), excess_s_(ctx.W_excess(s)) {}
    double operator()(double t) const {
        if (t >= s_) return 0.0;
        return std::exp(-ctx_.zeta() * (s_ - t)) * excess_s_ - ctx_.W_excess(t);
    }

private:
    const ScaleContext& ctx_;
    double s_;
    double excess_s_;
};

// int_0^inf e^{-zeta w} Pi(A + w, inf) dw, which equals
// (1/zeta) int_A^inf Pi(du) (1 - e^{-zeta(u - A)}).
double tail_kernel(const ScaleContext& ctx, double A) {
    const double zeta = ctx.zeta();
    if (const auto* m = analytic_model(ctx)) return m->lambda * std::exp(-m->eta * A) / (m->eta + zeta);
    const auto& model = ctx.model();
    double w_max = 1.0;
    for (int k = 0; k < kMaxBracketExpansions && levy_tail(model, A + w_max) > kTailMass; ++k) w_max *= 2.0;
    return integrate(
        [&](double w) {
            const double y = A + w;
            return y > 0.0 ? std::exp(-zeta * w) * levy_tail(model, y) : 0.0;
        },
        0.0, w_max);
}

// E^x[int_0^{tau_A} e^{-qt} h(X_t) dt] for 0 <= A < x; A = 0 gives G/gamma.
double integral_to_threshold(const ScaleContext& ctx, const Penalty& h, double x, double A) {
    const double s = x - A;
    const double zeta = ctx.zeta();
    const auto* exp_h = std::get_if<ExpUtility>(&h);
    const bool closed = std::holds_alternative<Constant1>(h) || exp_h;
    if (analytic_model(ctx) && closed) {
        const auto& terms = ctx.terms();
        double total = terms.front().coef / zeta;
        for (std::size_t i = 1; i < terms.size(); ++i) {
            const double r = terms[i].root;
            total += terms[i].coef * (std::exp(r * s) / zeta - std::expm1(r * s) / r);
        }
        if (exp_h && std::isfinite(exp_h->rho)) {
            const double rho = exp_h->rho;
            const double decay = std::exp(-rho * s);
            double sub = terms.front().coef * decay / (zeta + rho);
            for (std::size_t i = 1; i < terms.size(); ++i) {
                const double r = terms[i].root;
                const double g = r + rho == 0.0 ? decay * s : decay * std::expm1((r + rho) * s) / (r + rho);
                sub += terms[i].coef * (std::exp(r * s) / (zeta + rho) - g);
            }
            total -= std::exp(-rho * A) * sub;
        }
        return total;
    }
    const ResolventCore core(ctx, s);
    const double inner = integrate([&](double y) { return core(x - y) * penalty_value(h, y); }, A, x);
    return inner + ctx.W_scaled(s) * penalty_transform(ctx, h, x);
}

// R_x(tau_A) for 0 <= A < x via the resolvent integrated against the
// Levy tail; A = 0 is the eps -> 0 limit.
double risk(const ScaleContext& ctx, double x, double A) {
    const double s = x - A;
    const double zeta = ctx.zeta();
    double value;
    if (const auto* m = analytic_model(ctx)) {
        const double eta = m->eta;
        const auto& terms = ctx.terms();
        double sum = 0.0, boundary = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double r = terms[i].root;
            if (i > 0) sum += terms[i].coef * std::exp(r * s) * (1.0 / (eta + zeta) - 1.0 / (eta + r));
            boundary += terms[i].coef / (eta + r);
        }
        value = m->lambda * std::exp(-eta * A) * (sum + std::exp(-eta * s) * boundary);
    } else {
        const auto& model = ctx.model();
        const ResolventCore core(ctx, s);
        const double inner = integrate(
            [&](double y) { return y > 0.0 ? core(x - y) * levy_tail(model, y) : 0.0; }, A, x);
        value = inner + ctx.W_scaled(s) * tail_kernel(ctx, x);
    }
    return std::clamp(value, 0.0, 1.0);
}

// (1/q) int_A^inf Pi(du) (Z(x - A) - Z(x - u)) = int_A^x W(x - y) Pi(y, inf) dy.
double overshoot_integral(const ScaleContext& ctx, double x, double A) {
    if (x <= A) return 0.0;
    const double s = x - A;
    if (const auto* m = analytic_model(ctx)) {
        double sum = 0.0;
        for (const auto& t : ctx.terms()) sum += t.coef * (std::exp(t.root * s) - std::exp(-m->eta * s)) / (t.root + m->eta);
        return m->lambda * std::exp(-m->eta * A) * sum;
    }
    const double zeta = ctx.zeta();
    return integrate(
        [&](double y) { return std::exp(zeta * (x - y)) * ctx.W_scaled(x - y) * levy_tail(ctx.model(), y); }, A, x);
}

// int_0^{min(A, x)} W(x - y) h(y) dy.
double head_integral(const ScaleContext& ctx, const Penalty& h, double x, double A) {
    const double m = std::min(A, x);
    if (!(m > 0.0)) return 0.0;
    const auto* exp_h = std::get_if<ExpUtility>(&h);
    if (analytic_model(ctx) && (std::holds_alternative<Constant1>(h) || exp_h)) {
        double total = 0.0;
        for (const auto& t : ctx.terms()) {
            const double grow = t.coef * std::exp(t.root * x);
            total -= grow * std::expm1(-t.root * m) / t.root;
            if (exp_h && std::isfinite(exp_h->rho)) {
                const double k = t.root + exp_h->rho;
                total -= k == 0.0 ? grow * m : -grow * std::expm1(-k * m) / k;
            }
        }
        return total;
    }
    return integrate([&](double y) { return ctx.W(x - y) * penalty_value(h, y); }, 0.0, m);
}

void require_gap(double x, double A, const char* what) {
    if (!(A > 0.0 && A < x)) throw PreconditionError(std::string(what) + ": requires 0 < A < x");
}

} // namespace

std::string to_string(Variation variation) {
    return variation == Variation::Bounded ? "Bounded" : "Unbounded";
}

double penalty_transform(const ScaleContext& ctx, const Penalty& h, double A) {
    const double zeta = ctx.zeta();
    if (std::holds_alternative<Constant1>(h)) return 1.0 / zeta;
    if (const auto* e = std::get_if<ExpUtility>(&h)) {
        if (std::isinf(e->rho)) return 1.0 / zeta;
        return 1.0 / zeta - std::exp(-e->rho * A) / (zeta + e->rho);
    }
    double value;
    try {
        boost::math::quadrature::exp_sinh<double> rule;
        value = rule.integrate([&](double y) { return std::exp(-zeta * y) * penalty_value(h, y + A); }, 0.0,
                               std::numeric_limits<double>::infinity(), kQuadTol);
    } catch (const std::exception& e) {
        throw InfiniteRegretError(std::string("penalty transform does not converge: ") + e.what());
    }
    if (!std::isfinite(value)) throw InfiniteRegretError("penalty transform diverges at zeta");
    return value;
}

double resolvent_density(const ScaleContext& ctx, double x, double A, double y) {
    require_gap(x, A, "resolvent_density");
    if (y < A) return 0.0;
    const double s = x - A;
    const double value = y <= x ? ResolventCore(ctx, s)(x - y) : std::exp(ctx.zeta() * (x - y)) * ctx.W_scaled(s);
    return std::max(value, 0.0);
}

double regret_integral(const ScaleContext& ctx, const CostSpec& cost, double x, double A) {
    require_gap(x, A, "regret_integral");
    return integral_to_threshold(ctx, cost.h, x, A);
}

double violation_risk_sn(const ScaleContext& ctx, double x, double A) {
    require_gap(x, A, "violation_risk_sn");
    return risk(ctx, x, A);
}

double big_phi(const ScaleContext& ctx, const CostSpec& cost, double A) {
    detail::require_pre(A > 0.0, "big_phi: requires A > 0");
    return tail_kernel(ctx, A) - cost.gamma * penalty_transform(ctx, cost.h, A);
}

double optimal_threshold_sn(const ScaleContext& ctx, const CostSpec& cost, double tol) {
    auto phi = [&](double A) { return big_phi(ctx, cost, A); };
    if (phi(kPhiFloor) <= 0.0) return 0.0;
    double hi = 1.0;
    for (int k = 0; phi(hi) >= 0.0; ++k, hi *= 2.0)
        if (k == kMaxBracketExpansions) throw NumericFailure("optimal_threshold_sn: Phi has no sign change");
    return bisect(phi, kPhiFloor, hi, tol);
}

// ---------------------------------------------------------------------------

SnlpSolution::SnlpSolution(const SpectralNegModel& model, const CostSpec& cost, double tol, ScaleOptions options)
    : SnlpSolution(
          [&] {
              cost.validate();
              if (!(cost.q > 0.0)) throw DomainError("solve-snlp: q = 0 is not supported for spectrally negative models");
              return ScaleContext(model, cost.q, options);
          }(),
          cost, tol) {}

SnlpSolution::SnlpSolution(ScaleContext ctx, const CostSpec& cost, double tol)
    : ctx_(std::move(ctx)),
      cost_(cost),
      variation_(ctx_.bounded_variation() ? Variation::Bounded : Variation::Unbounded) {
    cost_.validate();
    if (cost_.q != ctx_.q()) throw PreconditionError("SnlpSolution: cost q differs from the scale context q");
    penalty_transform(ctx_, cost_.h, 0.0);  // throws when the regret is infinite
    a_star_ = optimal_threshold_sn(ctx_, cost_, tol);
    if (a_star_ == 0.0)
        notes_.push_back("Phi(A) < 0 for all A > 0: A* = 0 and the value is the eps -> 0 limit");
    self_check();
}

void SnlpSolution::self_check() const {
    if (a_star_ == 0.0) return;
    for (double x : {0.5 * a_star_, a_star_ + 0.25, a_star_ + 1.0}) {
        const double a = value(x);
        const double b = value_simplified(x);
        if (!(std::abs(a - b) <= 1e-8))
            throw NumericFailure("SnlpSolution: simplified and full value forms disagree at x = " + std::to_string(x));
    }
}

double SnlpSolution::big_phi(double A) const {
    return capalarm::big_phi(ctx_, cost_, A);
}

double SnlpSolution::stopping_value(double x) const {
    if (x <= 0.0) return 1.0;
    return cost_.gamma * integral_to_threshold(ctx_, cost_.h, x, 0.0);
}

double SnlpSolution::threshold_value(double x, double A) const {
    detail::require_pre(A >= 0.0, "threshold_value: requires A >= 0");
    if (x <= 0.0) return 1.0;
    if (x <= A) return stopping_value(x);
    return violation_risk(x, A) + cost_.gamma * regret(x, A);
}

double SnlpSolution::violation_risk(double x, double A) const {
    detail::require_pre(A >= 0.0, "violation_risk: requires A >= 0");
    if (x <= A) return 0.0;
    return risk(ctx_, x, A);
}

double SnlpSolution::regret(double x, double A) const {
    detail::require_pre(A >= 0.0, "regret: requires A >= 0");
    if (x <= 0.0 || A == 0.0) return 0.0;
    const double full = integral_to_threshold(ctx_, cost_.h, x, 0.0);
    if (x <= A) return full;
    return full - integral_to_threshold(ctx_, cost_.h, x, A);
}

double SnlpSolution::value(double x) const {
    return threshold_value(x, a_star_);
}

double SnlpSolution::value_simplified(double x) const {
    if (x <= 0.0) return 1.0;
    const double lead = ctx_.W(x) * penalty_transform(ctx_, cost_.h, 0.0);
    return -overshoot_integral(ctx_, x, a_star_) + cost_.gamma * (lead - head_integral(ctx_, cost_.h, x, a_star_));
}

FitReport SnlpSolution::fit_diagnostics() const {
    FitReport report;
    report.variation = variation_;
    report.A_star = a_star_;
    if (a_star_ == 0.0) {
        report.notice = "A* = 0: fit diagnostics are unavailable";
        return report;
    }
    report.available = true;
    const double A = a_star_;
    const double g_at = stopping_value(A);
    report.continuity_gap = std::abs(value(A + 1e-7) - g_at);
    const double h = std::min(1e-4, 0.25 * A);
    report.phi_slope_right = (value(A + 2.0 * h) - g_at) / (2.0 * h);
    report.G_slope_left = (g_at - stopping_value(A - 2.0 * h)) / (2.0 * h);
    report.derivative_gap = std::abs(report.phi_slope_right - report.G_slope_left);
    report.w0_times_phi = ctx_.W_at_zero() * big_phi(A);
    if (variation_ == Variation::Bounded)
        report.notice = "bounded variation: continuous fit; the derivative jump is reported, not required to vanish";
    else
        report.notice = "unbounded variation: continuous and smooth fit";
    return report;
}

} // namespace capalarm
