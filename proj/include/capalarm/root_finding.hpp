#pragma once

#include "capalarm/errors.hpp"
#include "capalarm/levy_models.hpp"

#include <cmath>

namespace capalarm {

inline constexpr double kDefaultRootTol = 1e-10;
inline constexpr int kMaxBracketExpansions = 64;

/// Midpoint bisection on [lo, hi]. Requires f(lo) f(hi) <= 0 and returns the
/// midpoint of the final bracket once its width is <= tol (or the bracket can
/// no longer be split in double precision).
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("bisect: tol must be > 0");
    if (!(lo <= hi)) throw PreconditionError("bisect: lo must not exceed hi");
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi))
        throw PreconditionError("bisect: f(lo) and f(hi) must bracket a root");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// The two roots of psi(-beta) = q used by the DEJD solution:
/// 0 < xi1 < eta_minus < xi2 when q > 0.
struct XiRoots {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double q = 0.0;
    double tol = kDefaultRootTol;
    /// Set when p = 0: the half-line (0, eta_minus) carries no pole and one of
    /// the roots is the p -> 0 limit value eta_minus itself.
    bool degenerate_p0 = false;
};

/// Solves psi(-beta) = q for the DEJD. For q = 0 with non-positive overall
/// drift xi1 = 0 exactly.
XiRoots find_xi(const DejdParams& params, double q, double tol = kDefaultRootTol);

/// zeta_q = sup{b >= 0 : psi(b) = q} for q > 0.
double find_zeta(const SpectralNegModel& model, double q, double tol = kDefaultRootTol);

} // namespace capalarm
