#pragma once

#include <complex>
#include <functional>
#include <string>
#include <variant>

namespace capalarm {

/// Two-sided double exponential jump diffusion
///   X_t = x + mu t + sigma B_t + sum_{i <= N_t} Z_i,
/// with N a Poisson process of rate lambda and Z_i drawn from
///   f(z) = p eta_minus e^{eta_minus z} 1{z<0} + (1-p) eta_plus e^{-eta_plus z} 1{z>0}.
struct DejdParams {
    double mu = 0.0;
    double sigma = 1.0;
    double lambda = 1.0;
    double p = 0.5;
    double eta_minus = 1.0;
    double eta_plus = 1.0;

    /// Throws DomainError unless sigma, lambda, eta_minus, eta_plus > 0
    /// and 0 <= p <= 1.
    void validate() const;
};

/// Spectrally negative compound Poisson process with exponential jumps of
/// rate eta, drift mu and optional Brownian component sigma.
struct ExpJumpCPP {
    double mu = 0.0;
    double sigma = 0.0;
    double lambda = 1.0;
    double eta = 1.0;
};

/// Spectrally negative tempered stable (CGMY) process with Levy density
/// bigC e^{-lam x} / x^{1+alpha} on (0, inf) and mean c.
struct TemperedStable {
    double c = 0.0;
    double bigC = 1.0;
    double lam = 1.0;
    double alpha = 0.5;
};

/// Spectrally negative variance gamma process: density bigC e^{-lam x} / x.
struct VarianceGamma {
    double c = 0.0;
    double bigC = 1.0;
    double lam = 1.0;
};

using SpectralNegModel = std::variant<ExpJumpCPP, TemperedStable, VarianceGamma>;

/// Throws DomainError when the parameters violate the model invariants,
/// including the requirement that a bounded-variation model have strictly
/// positive drift (otherwise X would be a negative subordinator).
void validate(const SpectralNegModel& model);

std::string model_name(const SpectralNegModel& model);

bool has_bounded_variation(const SpectralNegModel& model);

/// Gaussian coefficient sigma (zero for the pure-jump variants).
double gaussian_sigma(const SpectralNegModel& model);

/// Drift mu = c + int_0^inf x Pi(dx) of the bounded-variation representation
///   psi(b) = mu b + int (e^{-b x} - 1) Pi(dx).
/// Throws DomainError for unbounded-variation models.
double bounded_variation_drift(const SpectralNegModel& model);

/// Total Levy mass Pi(0, inf); +inf for infinite-activity models.
double levy_total_mass(const SpectralNegModel& model);

/// Levy density of Pi at x > 0.
double levy_density(const SpectralNegModel& model, double x);

/// Pi(x, inf) for x > 0.
double levy_tail(const SpectralNegModel& model, double x);

/// psi(beta) = log E[e^{beta X_1}]. For the DEJD the rational form is used on
/// the whole real line minus the poles -eta_minus and eta_plus (evaluations
/// within 1e-12 of a pole throw DomainError).
double laplace_exponent(const DejdParams& params, double beta);
double laplace_exponent(const SpectralNegModel& model, double beta);

/// Analytic extension of psi to the complex plane (principal branches).
std::complex<double> laplace_exponent(const SpectralNegModel& model, std::complex<double> beta);

double laplace_exponent_derivative(const DejdParams& params, double beta);
double laplace_exponent_derivative(const SpectralNegModel& model, double beta);

/// Overall drift E[X_1] = mu + lambda (-p/eta_minus + (1-p)/eta_plus).
double overall_drift(const DejdParams& params);

/// Mean E[X_1] of a spectrally negative model, psi'(0+).
double overall_drift(const SpectralNegModel& model);

// -- penalty functions -------------------------------------------------------

struct Constant1 {};

/// Exponential utility h(x) = 1 - e^{-rho x}; rho -> inf recovers h = 1.
struct ExpUtility {
    double rho = 1.0;
};

/// User supplied non-decreasing continuous penalty. When the derivative is
/// empty it is replaced by a central difference of step 1e-6.
struct CustomPenalty {
    std::function<double(double)> h;
    std::function<double(double)> dh;
};

using Penalty = std::variant<Constant1, ExpUtility, CustomPenalty>;

double penalty_value(const Penalty& h, double x);
double penalty_derivative(const Penalty& h, double x);
std::string penalty_name(const Penalty& h);

struct CostSpec {
    double q = 0.05;
    double gamma = 0.04;
    Penalty h = Constant1{};

    /// q >= 0, gamma > 0, rho > 0 for ExpUtility and a callable for Custom.
    void validate() const;
};

struct ShiftedProblem {
    double x0;
    CostSpec cost;
};

/// Maps the geometric problem Y = exp(X) with violation level a > 0 onto the
/// arithmetic one: x0 -> x0 - log a and h(x) -> h(exp(x + log a)).
/// A shifted start <= 0 means the problem starts in the violated region.
ShiftedProblem geometric_shift(double a, double x0, const CostSpec& spec);

} // namespace capalarm
