#pragma once

#include "capalarm/levy_models.hpp"
#include "capalarm/root_finding.hpp"

#include <string>
#include <vector>

namespace capalarm {

enum class DejdRegime { PositiveQ, ZeroQ };

std::string to_string(DejdRegime regime);

/// First-passage functionals of the DEJD below a level A, for a fixed q >= 0.
/// Holds the roots xi1, xi2 and the weights
///   l1 = (eta_minus - xi1) / (xi2 - xi1),  l2 = (xi2 - eta_minus) / (xi2 - xi1).
class DejdPassage {
public:
    DejdPassage(const DejdParams& params, double q, double tol = kDefaultRootTol);

    const DejdParams& params() const noexcept { return params_; }
    double q() const noexcept { return q_; }
    const XiRoots& roots() const noexcept { return roots_; }
    double l1() const noexcept { return l1_; }
    double l2() const noexcept { return l2_; }
    double overall_drift() const noexcept { return ubar_; }

    /// R_x(tau_A) = E^x[e^{-q tau_A} 1{X_{tau_A} <= 0}] for 0 < A < x.
    /// q = 0 requires a negative overall drift.
    double violation_risk(double x, double A) const;

    /// E^x[int_0^{tau_A} e^{-qt} dt] for 0 <= A < x; for q = 0 this is
    /// E^x[tau_A], which is +inf unless the overall drift is negative.
    double discounted_clock(double x, double A) const;

    /// lim_{A -> 0+} R_x(tau_A): the discounted probability that the process
    /// jumps strictly over zero.
    double overshoot_risk(double x) const;

private:
    DejdParams params_;
    double q_;
    XiRoots roots_;
    double l1_ = 0.0;
    double l2_ = 0.0;
    double ubar_ = 0.0;
};

/// Closed-form solution of the alarm problem for the DEJD with h = 1.
class DejdSolution {
public:
    /// Throws InfiniteRegretError when q = 0 and the overall drift is >= 0.
    DejdSolution(const DejdParams& params, double q, double gamma, double tol = kDefaultRootTol);

    const DejdParams& params() const noexcept { return passage_.params(); }
    const DejdPassage& passage() const noexcept { return passage_; }
    const XiRoots& roots() const noexcept { return passage_.roots(); }
    double q() const noexcept { return passage_.q(); }
    double gamma() const noexcept { return gamma_; }
    DejdRegime regime() const noexcept { return regime_; }
    double l1() const noexcept { return passage_.l1(); }
    double l2() const noexcept { return passage_.l2(); }
    /// Stopping-value coefficients (q > 0; zero otherwise).
    double C1() const noexcept { return c1_; }
    double C2() const noexcept { return c2_; }
    /// Value-function coefficients (q > 0 and A* > 0; zero otherwise).
    double L1() const noexcept { return big_l1_; }
    double L2() const noexcept { return big_l2_; }
    double A_star() const noexcept { return a_star_; }
    /// True when the strict smooth-fit existence inequality holds.
    bool smooth_fit_condition() const noexcept { return condition_holds_; }
    const std::vector<std::string>& diagnostics() const noexcept { return notes_; }

    /// G(x): 1 for x <= 0, gamma E^x[int_0^theta e^{-qt} dt] for x > 0.
    double stopping_value(double x) const;

    /// R_x(tau_A) for any A >= 0: 0 when x <= A, the overshoot limit at A = 0.
    double violation_risk(double x, double A) const;

    /// Regret H_x(tau_A) = E^x[int_{tau_A}^theta e^{-qt} dt] of the threshold
    /// rule; A >= x means immediate stopping.
    double regret(double x, double A) const;

    /// delta_A(x) = phi_A(x) - G(x) for 0 < A < x.
    double delta(double x, double A) const;

    /// Simplified delta at A = A* (requires A* > 0, x > A*).
    double delta_at_optimum(double x) const;

    /// One-sided derivative d/dx delta_A(x) at x = A+.
    double delta_slope_at_threshold(double A) const;

    /// phi_A(x) = U_x(tau_A) for a threshold rule A >= 0, A = 0 meaning the
    /// limit of tau_eps as eps -> 0.
    double threshold_value(double x, double A) const;

    /// Value function phi(x) = phi_{A*}(x) in its closed form.
    double value(double x) const;

private:
    DejdPassage passage_;
    double gamma_;
    DejdRegime regime_;
    double c1_ = 0.0, c2_ = 0.0;
    double big_l1_ = 0.0, big_l2_ = 0.0;
    double a_star_ = 0.0;
    bool condition_holds_ = false;
    std::vector<std::string> notes_;
};

/// A* for the DEJD with h = 1.
double optimal_threshold(const DejdParams& params, double q, double gamma, double tol = kDefaultRootTol);

} // namespace capalarm
