#pragma once

#include "capalarm/levy_models.hpp"
#include "capalarm/root_finding.hpp"
#include "capalarm/scale_fn.hpp"

#include <string>
#include <vector>

namespace capalarm {

enum class Variation { Bounded, Unbounded };

std::string to_string(Variation variation);

/// T_h(A) = int_0^inf e^{-zeta y} h(y + A) dy. Closed forms for Constant1 and
/// ExpUtility; semi-infinite quadrature for Custom. Throws InfiniteRegretError
/// when the integral diverges.
double penalty_transform(const ScaleContext& ctx, const Penalty& h, double A);

/// q-resolvent density of X killed below A, at y:
///   e^{-zeta (y - A)} W(x - A) - 1{x >= y} W(x - y) for y >= A, 0 below A.
double resolvent_density(const ScaleContext& ctx, double x, double A, double y);

/// E^x[int_0^{tau_A} e^{-qt} h(X_t) dt] for 0 < A < x.
double regret_integral(const ScaleContext& ctx, const CostSpec& cost, double x, double A);

/// R_x(tau_A) = E^x[e^{-q tau_A} 1{X_{tau_A} <= 0}] for 0 < A < x.
double violation_risk_sn(const ScaleContext& ctx, double x, double A);

/// Phi(A) = (1/zeta) int_A^inf Pi(du) (1 - e^{-zeta(u-A)}) - gamma T_h(A);
/// strictly decreasing, its root is the optimal threshold.
double big_phi(const ScaleContext& ctx, const CostSpec& cost, double A);

/// Root of Phi by bisection, or 0 when Phi(1e-8) <= 0.
double optimal_threshold_sn(const ScaleContext& ctx, const CostSpec& cost, double tol = kDefaultRootTol);

struct FitReport {
    bool available = false;
    std::string notice;
    Variation variation = Variation::Bounded;
    double A_star = 0.0;
    /// |phi(A* + 1e-7) - G(A*)|.
    double continuity_gap = 0.0;
    /// |phi'(A*+) - G'(A*-)|, central differences of step 1e-4 taken just
    /// outside A* on each side. Reported for both variation classes; only
    /// the unbounded case is expected to close it.
    double derivative_gap = 0.0;
    double phi_slope_right = 0.0;
    double G_slope_left = 0.0;
    /// W(0) Phi(A*): zero when continuous fit holds.
    double w0_times_phi = 0.0;
};

/// Alarm problem for a spectrally negative model and a general penalty h.
class SnlpSolution {
public:
    /// q = 0 is rejected with DomainError.
    SnlpSolution(const SpectralNegModel& model, const CostSpec& cost, double tol = kDefaultRootTol,
                 ScaleOptions options = {});
    SnlpSolution(ScaleContext ctx, const CostSpec& cost, double tol = kDefaultRootTol);

    const ScaleContext& context() const noexcept { return ctx_; }
    const CostSpec& cost() const noexcept { return cost_; }
    double A_star() const noexcept { return a_star_; }
    Variation variation() const noexcept { return variation_; }
    const std::vector<std::string>& diagnostics() const noexcept { return notes_; }

    double big_phi(double A) const;
    /// G(x) = gamma E^x[int_0^theta e^{-qt} h(X_t) dt] (1 for x <= 0).
    double stopping_value(double x) const;
    /// phi_A(x) for a threshold rule; A = 0 is the eps -> 0 limit.
    double threshold_value(double x, double A) const;
    /// R_x(tau_A) for any A >= 0 (0 when x <= A).
    double violation_risk(double x, double A) const;
    /// Regret H_x(tau_A) = E^x[int_{tau_A}^theta e^{-qt} h(X_t) dt].
    double regret(double x, double A) const;

    /// Value function phi(x) in the form valid on both sides of A*.
    double value(double x) const;
    /// Form using Phi(A*) = 0; equals value() when A* > 0.
    double value_simplified(double x) const;

    FitReport fit_diagnostics() const;

private:
    void self_check() const;

    ScaleContext ctx_;
    CostSpec cost_;
    double a_star_ = 0.0;
    Variation variation_;
    std::vector<std::string> notes_;
};

} // namespace capalarm
