#pragma once

// Independent numerical oracles for the tests. Nothing here calls the
// library's quadrature or root finders.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 4> kGlNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                0.9602898564975363};
inline constexpr std::array<double, 4> kGlWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                  0.1012285362903763};

/// Composite 8-point Gauss-Legendre rule with `panels` equal panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = a + (k + 0.5) * width;
        const double half = 0.5 * width;
        double s = 0.0;
        for (std::size_t i = 0; i < kGlNodes.size(); ++i)
            s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
        total += half * s;
    }
    return total;
}

/// Trapezoid rule at a fixed step.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, double step) {
    const auto n = static_cast<long>(std::llround((b - a) / step));
    const double h = (b - a) / static_cast<double>(n);
    double total = 0.5 * (f(a) + f(b));
    for (long k = 1; k < n; ++k) total += f(a + h * static_cast<double>(k));
    return total * h;
}

/// Sign-change locations of f on [a, b] at the given step; each entry is the
/// midpoint of a cell whose endpoints have opposite signs.
inline std::vector<double> sign_changes(const std::function<double(double)>& f, double a, double b, double step) {
    std::vector<double> roots;
    double x0 = a, f0 = f(a);
    const auto n = static_cast<long>(std::ceil((b - a) / step));
    for (long k = 1; k <= n; ++k) {
        const double x1 = std::min(b, a + step * static_cast<double>(k));
        const double f1 = f(x1);
        if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(0.5 * (x0 + x1));
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

/// Grid point minimising |f| on [a, b] at the given step.
inline double grid_argmin_abs(const std::function<double(double)>& f, double a, double b, double step) {
    double best = a, best_val = std::numeric_limits<double>::infinity();
    const auto n = static_cast<long>(std::ceil((b - a) / step));
    for (long k = 0; k <= n; ++k) {
        const double x = std::min(b, a + step * static_cast<double>(k));
        const double v = std::abs(f(x));
        if (v < best_val) {
            best_val = v;
            best = x;
        }
    }
    return best;
}

} // namespace oracle
