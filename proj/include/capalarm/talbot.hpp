#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace capalarm {

/// Fixed-Talbot inversion of a Laplace transform F at t > 0 with M nodes
/// (Abate-Valko), using the contour s(theta) = r theta (cot theta + i),
/// r = 2M / (5t). F must be analytic to the right of the contour and
/// satisfy F(conj s) = conj F(s). In double precision M ~ 32 balances
/// truncation against the e^{rt} = e^{0.4 M} amplification of round-off.
template <class F>
double talbot_invert(F&& transform, double t, int nodes) {
    using C = std::complex<double>;
    const double r = 2.0 * nodes / (5.0 * t);
    double sum = 0.5 * std::real(transform(C(r, 0.0))) * std::exp(r * t);
    for (int k = 1; k < nodes; ++k) {
        const double theta = k * std::numbers::pi / nodes;
        const double cot = std::cos(theta) / std::sin(theta);
        const C s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        sum += std::real(std::exp(t * s) * transform(s) * C(1.0, sigma));
    }
    return r / nodes * sum;
}

} // namespace capalarm
