#pragma once

#include "capalarm/levy_models.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace capalarm {

/// Models the simulator can generate: the DEJD and the exponential-jump
/// spectrally negative process. Tempered stable and variance gamma are
/// rejected with UnsupportedModelError.
using SimModel = std::variant<DejdParams, SpectralNegModel>;

struct SimConfig {
    std::size_t n_paths = 100000;
    double dt = 1e-3;
    /// <= 0 selects 50 / |min(mean drift, -0.01)|.
    double t_max = 0.0;
    std::uint64_t seed = 20240611;
    /// Pairs each path with its mirror (negated Gaussian increments, reflected
    /// uniforms); standard errors are then taken over pair averages.
    bool antithetic = false;
    /// 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_effective = 0;
    std::string bias_note;
};

/// Estimates for one threshold rule tau_A.
struct ThresholdEstimate {
    double A = 0.0;
    Estimate R;  // E[e^{-q tau} 1{X_tau <= 0}]
    Estimate H;  // E[int_tau^theta e^{-qt} h(X_t) dt]
    Estimate U;  // R + gamma H
    Estimate to_threshold;  // E[int_0^tau e^{-qt} h(X_t) dt]
};

struct SimulationResult {
    std::vector<ThresholdEstimate> rows;  // in the order of the requested thresholds
    double t_max = 0.0;
    /// Fraction of paths still alive at t_max.
    double truncated_fraction = 0.0;
    /// e^{-q t_max} gamma / q (infinite for q = 0): bound on the truncation error of U.
    double truncation_bound = 0.0;
};

/// Downward shift of an effective barrier caused by monitoring a Brownian
/// component on a grid of step dt (0.5826 sigma sqrt(dt)).
double grid_monitoring_shift(double sigma, double dt);

/// First-order allowance for that bias in a threshold functional f(x, A).
/// Both monitored barriers move down by d: the alarm level A (f(x0, A - d),
/// or f(x0, A + d) when A < d) and the violation level 0 (f(x0 + d, A + d)).
/// The two effects are added in absolute value; d = 0 gives 0.
double monitoring_allowance(const std::function<double(double, double)>& f, double x0, double A, double d);

double resolved_t_max(const SimModel& model, const SimConfig& cfg);

/// Simulates every threshold in A_levels on the same paths (common random
/// numbers). A = 0 stands for the eps -> 0 limit: only jumps that land at or
/// below zero count as violations at the alarm.
SimulationResult simulate_thresholds(const SimModel& model, double x0, const std::vector<double>& A_levels,
                                     const CostSpec& cost, const SimConfig& cfg);

ThresholdEstimate simulate_objective(const SimModel& model, double x0, double A, const CostSpec& cost,
                                     const SimConfig& cfg);

struct GridSearchResult {
    double A_best = 0.0;
    std::vector<ThresholdEstimate> table;
};

/// Grid minimiser of the estimated objective U over A_grid.
GridSearchResult grid_threshold_search(const SimModel& model, double x0, const CostSpec& cost,
                                       const std::vector<double>& A_grid, const SimConfig& cfg);

} // namespace capalarm
