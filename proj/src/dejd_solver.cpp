#include "capalarm/dejd_solver.hpp"

#include "capalarm/errors.hpp"

#include <cmath>
#include <limits>

namespace capalarm {

std::string to_string(DejdRegime regime) {
    return regime == DejdRegime::PositiveQ ? "PositiveQ" : "ZeroQ";
}

// ---------------------------------------------------------------------------
// DejdPassage

DejdPassage::DejdPassage(const DejdParams& params, double q, double tol)
    : params_(params), q_(q), roots_(find_xi(params, q, tol)), ubar_(capalarm::overall_drift(params)) {
    const double spread = roots_.xi2 - roots_.xi1;
    if (!(spread > 0.0)) throw NumericFailure("DejdPassage: xi roots coincide");
    l1_ = (params_.eta_minus - roots_.xi1) / spread;
    l2_ = (roots_.xi2 - params_.eta_minus) / spread;
}

double DejdPassage::violation_risk(double x, double A) const {
    detail::require_pre(A > 0.0 && A < x, "violation_risk: requires 0 < A < x");
    if (q_ == 0.0 && !(ubar_ < 0.0))
        throw PreconditionError("violation_risk: q = 0 requires a negative overall drift");
    const double eta = params_.eta_minus;
    const double s = x - A;
    const auto& r = roots_;
    return std::exp(-eta * A) / eta *
           ((r.xi2 - eta) * l1_ * std::exp(-r.xi1 * s) - (eta - r.xi1) * l2_ * std::exp(-r.xi2 * s));
}

double DejdPassage::discounted_clock(double x, double A) const {
    detail::require_pre(A >= 0.0 && A < x, "discounted_clock: requires 0 <= A < x");
    const double eta = params_.eta_minus;
    const double s = x - A;
    const auto& r = roots_;
    if (q_ > 0.0) {
        return (l1_ * r.xi2 * -std::expm1(-r.xi1 * s) + l2_ * r.xi1 * -std::expm1(-r.xi2 * s)) / (q_ * eta);
    }
    if (!(ubar_ < 0.0)) return std::numeric_limits<double>::infinity();
    return (s + (r.xi2 - eta) / (eta * r.xi2) * -std::expm1(-r.xi2 * s)) / std::abs(ubar_);
}

double DejdPassage::overshoot_risk(double x) const {
    if (x <= 0.0) return 1.0;
    const double eta = params_.eta_minus;
    const auto& r = roots_;
    const double k = (eta - r.xi1) * (r.xi2 - eta) / (eta * (r.xi2 - r.xi1));
    return k * (std::exp(-r.xi1 * x) - std::exp(-r.xi2 * x));
}

// ---------------------------------------------------------------------------
// DejdSolution

DejdSolution::DejdSolution(const DejdParams& params, double q, double gamma, double tol)
    : passage_(params, q, tol), gamma_(gamma), regime_(q > 0.0 ? DejdRegime::PositiveQ : DejdRegime::ZeroQ) {
    detail::require(std::isfinite(gamma) && gamma > 0.0, "DejdSolution: gamma must be > 0");
    const double ubar = passage_.overall_drift();
    if (q == 0.0 && !(ubar < 0.0))
        throw InfiniteRegretError("DejdSolution: q = 0 with overall drift >= 0 gives infinite regret");

    const double eta = params.eta_minus;
    const double xi1 = roots().xi1;
    const double xi2 = roots().xi2;
    const double gap_product = (eta - xi1) * (xi2 - eta);

    double ratio = 0.0;  // argument of the logarithm defining A*
    if (regime_ == DejdRegime::PositiveQ) {
        const double scale = gamma / q;
        c1_ = scale * l1() * xi2 / eta;
        c2_ = scale * l2() * xi1 / eta;
        condition_holds_ = gap_product > scale * xi1 * xi2;
        if (condition_holds_) ratio = scale * xi1 * xi2 / gap_product;
    } else {
        const double rhs = gamma * xi2 / (std::abs(ubar) * eta);
        condition_holds_ = (xi2 - eta) > rhs;
        if (condition_holds_) ratio = rhs / (xi2 - eta);
    }

    if (condition_holds_) a_star_ = -std::log(ratio) / eta;
    if (!(a_star_ > 0.0)) a_star_ = 0.0;

    if (regime_ == DejdRegime::PositiveQ && a_star_ > 0.0) {
        const double scale = gamma / q / (xi2 - xi1);
        big_l1_ = scale * xi2 * std::exp(xi1 * a_star_);
        big_l2_ = -scale * xi1 * std::exp(xi2 * a_star_);
    }

    if (roots().degenerate_p0)
        notes_.push_back("p = 0: no downward jumps; eta_minus stands in for one root (p -> 0 limit)");
    if (!condition_holds_)
        notes_.push_back("smooth-fit existence condition fails: A* = 0 and the value is the eps -> 0 limit");
}

double DejdSolution::stopping_value(double x) const {
    if (x <= 0.0) return 1.0;
    return gamma_ * passage_.discounted_clock(x, 0.0);
}

double DejdSolution::violation_risk(double x, double A) const {
    detail::require_pre(A >= 0.0, "violation_risk: requires A >= 0");
    if (x <= A) return 0.0;
    if (A == 0.0) return passage_.overshoot_risk(x);
    return passage_.violation_risk(x, A);
}

double DejdSolution::regret(double x, double A) const {
    if (x <= 0.0) return 0.0;
    const double full = passage_.discounted_clock(x, 0.0);
    if (A >= x) return full;
    if (A <= 0.0) return 0.0;
    return full - passage_.discounted_clock(x, A);
}

double DejdSolution::delta(double x, double A) const {
    detail::require_pre(A > 0.0 && A < x, "delta: requires 0 < A < x");
    const double eta = params().eta_minus;
    const double xi1 = roots().xi1;
    const double xi2 = roots().xi2;
    const double s = x - A;
    const double jump = std::exp(-eta * A);
    if (regime_ == DejdRegime::PositiveQ) {
        const double scale = gamma_ / q();
        return l1() / eta * ((xi2 - eta) * std::exp(-xi1 * s) * jump - scale * xi2 * -std::expm1(-xi1 * s)) +
               l2() / eta * (-(eta - xi1) * std::exp(-xi2 * s) * jump - scale * xi1 * -std::expm1(-xi2 * s));
    }
    const double scale = gamma_ / std::abs(passage_.overall_drift());
    return l1() / eta * ((xi2 - eta) * jump - scale * xi2 * s) +
           l2() / eta * (-eta * std::exp(-xi2 * s) * jump - scale * -std::expm1(-xi2 * s));
}

double DejdSolution::delta_at_optimum(double x) const {
    detail::require_pre(a_star_ > 0.0, "delta_at_optimum: requires A* > 0");
    detail::require_pre(x > a_star_, "delta_at_optimum: requires x > A*");
    const double xi1 = roots().xi1;
    const double xi2 = roots().xi2;
    const double s = x - a_star_;
    if (regime_ == DejdRegime::PositiveQ) {
        return gamma_ / q() / (xi2 - xi1) * (xi2 * std::expm1(-xi1 * s) - xi1 * std::expm1(-xi2 * s));
    }
    return -gamma_ / std::abs(passage_.overall_drift()) * (s + std::expm1(-xi2 * s) / xi2);
}

double DejdSolution::delta_slope_at_threshold(double A) const {
    const double eta = params().eta_minus;
    const double xi1 = roots().xi1;
    const double xi2 = roots().xi2;
    if (regime_ == DejdRegime::PositiveQ)
        return ((eta - xi1) * (xi2 - eta) * std::exp(-eta * A) - gamma_ / q() * xi1 * xi2) / eta;
    return (xi2 - eta) * std::exp(-eta * A) - gamma_ * xi2 / (std::abs(passage_.overall_drift()) * eta);
}

double DejdSolution::threshold_value(double x, double A) const {
    detail::require_pre(A >= 0.0, "threshold_value: requires A >= 0");
    if (x <= 0.0) return 1.0;
    if (A == 0.0) return passage_.overshoot_risk(x);
    if (x <= A) return stopping_value(x);
    return stopping_value(x) + delta(x, A);
}

double DejdSolution::value(double x) const {
    if (x <= 0.0) return 1.0;
    if (a_star_ == 0.0) return passage_.overshoot_risk(x);
    if (x <= a_star_) return stopping_value(x);
    const double xi1 = roots().xi1;
    const double xi2 = roots().xi2;
    if (regime_ == DejdRegime::PositiveQ)
        return (big_l1_ - c1_) * std::exp(-xi1 * x) + (big_l2_ - c2_) * std::exp(-xi2 * x);
    const double eta = params().eta_minus;
    return gamma_ / std::abs(passage_.overall_drift()) *
           (a_star_ + (xi2 - eta) / (eta * xi2) * -std::expm1(-xi2 * x) - std::expm1(-xi2 * (x - a_star_)) / xi2);
}

double optimal_threshold(const DejdParams& params, double q, double gamma, double tol) {
    return DejdSolution(params, q, gamma, tol).A_star();
}

} // namespace capalarm
