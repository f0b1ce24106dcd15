#pragma once

#include "capalarm/levy_models.hpp"

#include <string>
#include <vector>

namespace capalarm {

enum class ScaleMethod { AnalyticExponentialSum, NumericInversion };

std::string to_string(ScaleMethod method);

/// One term coef * e^{root x} of an exponential-sum scale function.
struct ExpTerm {
    double root;
    double coef;
};

struct ScaleOptions {
    int talbot_nodes = 32;
    /// Use Laplace inversion even when the exponential-sum form exists.
    bool force_numeric = false;
};

/// q-scale functions W^(q), Z^(q) and the scaled W_zeta of a spectrally
/// negative model, for q > 0.
///
/// ExpJumpCPP uses the exact partial-fraction form
///   W(x) = sum_r e^{r x} / psi'(r)
/// over the real roots r of psi = q (zeta plus one negative root, or two when
/// sigma > 0). The residue sum is checked against W(0) at construction.
/// TemperedStable and VarianceGamma invert the bounded transform
///   int e^{-b x} W_zeta(x) dx = 1 / (psi(b + zeta) - q)
/// with a fixed Talbot contour and rescale by e^{zeta x}.
class ScaleContext {
public:
    ScaleContext(const SpectralNegModel& model, double q, ScaleOptions options = {});

    const SpectralNegModel& model() const noexcept { return model_; }
    double q() const noexcept { return q_; }
    double zeta() const noexcept { return zeta_; }
    ScaleMethod method() const noexcept { return method_; }
    bool bounded_variation() const noexcept { return bounded_variation_; }
    double psi_prime_at_zeta() const noexcept { return psi_prime_zeta_; }

    /// Exponential-sum terms (analytic method only); terms().front() is the
    /// zeta term.
    const std::vector<ExpTerm>& terms() const noexcept { return terms_; }

    /// W(0): 1/mu for bounded variation, 0 otherwise.
    double W_at_zero() const noexcept { return w_zero_; }

    /// W'(0+): 2/sigma^2 if sigma > 0, (q + Pi(0,inf))/mu^2 for compound
    /// Poisson, +inf otherwise.
    double W_derivative_at_zero() const;

    double W(double x) const;
    double Z(double x) const;
    double W_scaled(double x) const;

    /// W(x) - e^{zeta x} / psi'(zeta): W without its dominant exponential,
    /// bounded in x. Resolvent-type integrands are built from it so that
    /// large arguments do not cancel W_zeta against its limit.
    double W_excess(double x) const;

private:
    double W_scaled_numeric(double x) const;
    double Z_scaled_numeric(double x) const;

    SpectralNegModel model_;
    double q_;
    double zeta_ = 0.0;
    double psi_prime_zeta_ = 0.0;
    ScaleMethod method_;
    bool bounded_variation_;
    double w_zero_ = 0.0;
    int nodes_;
    std::vector<ExpTerm> terms_;
};

} // namespace capalarm
