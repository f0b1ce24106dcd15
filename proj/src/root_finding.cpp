#include "capalarm/root_finding.hpp"

#include <algorithm>
#include <string>

namespace capalarm {

namespace {

// Finds a point on the open side of a pole at `pole` (approached from
// `direction` = +1 above / -1 below) where g has the requested sign.
template <class G>
double point_near_pole(G&& g, double pole, double scale, int direction, bool want_positive) {
    double offset = 0.5 * scale;
    for (int k = 0; k < 60; ++k, offset *= 0.5) {
        const double x = pole + direction * offset;
        const double value = g(x);
        if ((value > 0.0) == want_positive && value != 0.0) return x;
    }
    throw NumericFailure("find_xi: no sign change next to the pole at " + std::to_string(pole));
}

// Doubles an upper bound starting from `start` until g(bound) > 0.
template <class G>
double expand_until_positive(G&& g, double offset_base, double start) {
    double width = start;
    for (int k = 0; k < kMaxBracketExpansions; ++k, width *= 2.0) {
        const double x = offset_base + width;
        if (g(x) > 0.0) return x;
    }
    throw NumericFailure("root bracket expansion failed after 64 doublings");
}

// Minimiser of a convex function on (lo, hi) by golden-section search.
template <class G>
double convex_argmin(G&& g, double lo, double hi) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double gc = g(c), gd = g(d);
    for (int k = 0; k < 200 && b - a > 1e-14 * std::max(1.0, b); ++k) {
        if (gc < gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

XiRoots find_xi(const DejdParams& params, double q, double tol) {
    params.validate();
    if (!(q >= 0.0) || !std::isfinite(q)) throw PreconditionError("find_xi: q must be >= 0");
    if (!(tol > 0.0)) throw PreconditionError("find_xi: tol must be > 0");

    const double eta = params.eta_minus;
    auto g = [&](double beta) { return laplace_exponent(params, -beta) - q; };
    const double ubar = overall_drift(params);

    XiRoots roots;
    roots.q = q;
    roots.tol = tol;

    if (params.p == 0.0) {
        // No downward jumps: psi(-beta) = q has at most one positive root and
        // eta_minus takes the place of the other one (the p -> 0 limit).
        roots.degenerate_p0 = true;
        double r = -1.0;
        if (q > 0.0) {
            r = bisect(g, 0.0, expand_until_positive(g, 0.0, 1.0), tol * std::min(1.0, q));
        } else if (ubar > 0.0) {
            const double m = convex_argmin(g, 0.0, 1.0 + 4.0 * ubar / (params.sigma * params.sigma));
            r = bisect(g, m, expand_until_positive(g, m, 1.0), tol);
        }
        if (r < 0.0) {
            roots.xi1 = 0.0;
            roots.xi2 = eta;
        } else {
            if (std::abs(r - eta) <= tol) throw NumericFailure("find_xi: p = 0 root coincides with eta_minus");
            roots.xi1 = std::min(r, eta);
            roots.xi2 = std::max(r, eta);
        }
        return roots;
    }

    // xi1 on (0, eta_minus): g(0) = -q <= 0 and g -> +inf at the pole.
    // xi1 is of order q for small q, so the tolerance is taken relative to q.
    if (q > 0.0) {
        roots.xi1 = bisect(g, 0.0, point_near_pole(g, eta, eta, -1, true), tol * std::min(1.0, q));
    } else if (ubar <= 0.0) {
        roots.xi1 = 0.0;
    } else {
        // g(0) = 0 with slope -ubar < 0: start from the interior minimum.
        const double m = convex_argmin(g, 0.0, point_near_pole(g, eta, eta, -1, true));
        if (!(g(m) < 0.0)) throw NumericFailure("find_xi: q = 0 interior minimum is not negative");
        roots.xi1 = bisect(g, m, point_near_pole(g, eta, eta, -1, true), tol);
    }

    // xi2 on (eta_minus, B): g -> -inf just above the pole, B doubled from eta_minus + 1.
    const double lo = point_near_pole(g, eta, 1.0, +1, false);
    const double hi = expand_until_positive(g, eta, 1.0);
    roots.xi2 = bisect(g, lo, hi, tol);
    return roots;
}

double find_zeta(const SpectralNegModel& model, double q, double tol) {
    validate(model);
    if (!(q > 0.0) || !std::isfinite(q)) throw PreconditionError("find_zeta: q must be > 0");
    if (!(tol > 0.0)) throw PreconditionError("find_zeta: tol must be > 0");
    auto g = [&](double beta) { return laplace_exponent(model, beta) - q; };
    const double hi = expand_until_positive(g, 0.0, 1.0);
    return bisect(g, 0.0, hi, tol);
}

} // namespace capalarm
