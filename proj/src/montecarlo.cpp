#include "capalarm/montecarlo.hpp"

#include "capalarm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace capalarm {

namespace {

constexpr std::size_t kChunk = 2048;
constexpr double kBarrierShiftConstant = 0.5826;  // -zeta(1/2) / sqrt(2 pi)

// Kou-type jump diffusion covering both supported inputs.
struct JumpDiffusion {
    double mu, sigma, lambda, p, eta_minus, eta_plus;
    double mean_drift;
};

JumpDiffusion to_jump_diffusion(const SimModel& model) {
    if (const auto* d = std::get_if<DejdParams>(&model)) {
        d->validate();
        return {d->mu, d->sigma, d->lambda, d->p, d->eta_minus, d->eta_plus, overall_drift(*d)};
    }
    const auto& sn = std::get<SpectralNegModel>(model);
    const auto* e = std::get_if<ExpJumpCPP>(&sn);
    if (!e) throw UnsupportedModelError("montecarlo: cannot simulate " + model_name(sn) + " paths");
    validate(sn);
    return {e->mu, e->sigma, e->lambda, 1.0, e->eta, 1.0, overall_drift(sn)};
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Two independent streams per path so that a mirrored path consumes its
// Gaussian and jump draws in lockstep with the original.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t index, bool mirror)
        : gauss_(splitmix64(seed + 2 * index)), jumps_(splitmix64(seed + 2 * index + 1)), mirror_(mirror) {}

    double normal() {
        const double z = normal_(gauss_);
        return mirror_ ? -z : z;
    }
    // Uniform on (0, 1].
    double uniform() {
        const double u = 1.0 - std::generate_canonical<double, 53>(jumps_);
        return mirror_ ? std::max(1.0 - u, std::numeric_limits<double>::min()) : u;
    }
    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    std::mt19937_64 gauss_;
    std::mt19937_64 jumps_;
    std::normal_distribution<double> normal_;
    bool mirror_;
};

struct LevelRecord {
    double discount = 0.0;  // e^{-q tau}; 0 if tau was never reached
    double integral = 0.0;  // int_0^tau e^{-qt} h dt
    double violated = 0.0;  // 1 when X_tau <= 0
    bool reached = false;
};

struct PathResult {
    std::vector<LevelRecord> levels;
    double total_integral = 0.0;  // int_0^{min(theta, t_max)}
    bool truncated = false;
};

class PathSimulator {
public:
    PathSimulator(const JumpDiffusion& m, const CostSpec& cost, const std::vector<double>& levels_desc, double x0,
                  const SimConfig& cfg, double t_max)
        : m_(m), cost_(cost), levels_(levels_desc), x0_(x0), dt_(cfg.dt), t_max_(t_max),
          unit_penalty_(std::holds_alternative<Constant1>(cost.h)), step_discount_(std::exp(-cost.q * cfg.dt)),
          sqrt_dt_(std::sqrt(cfg.dt)) {}

    void run(PathRng& rng, PathResult& out) {
        out.levels.assign(levels_.size(), LevelRecord{});
        out.truncated = false;
        next_ = 0;
        t_ = 0.0;
        x_ = x0_;
        discount_ = 1.0;
        integral_ = 0.0;
        mark(out, false);
        double next_jump = rng.exponential(m_.lambda);
        for (;;) {
            if (m_.sigma > 0.0) {
                if (diffuse_until(rng, std::min(next_jump, t_max_), out)) break;
            } else {
                drift_until(std::min(next_jump, t_max_));
            }
            if (next_jump >= t_max_) {
                out.truncated = true;
                break;
            }
            x_ += rng.uniform() <= m_.p ? -rng.exponential(m_.eta_minus) : rng.exponential(m_.eta_plus);
            if (mark(out, true)) break;
            next_jump += rng.exponential(m_.lambda);
        }
        out.total_integral = integral_;
    }

private:
    double penalty(double x) const { return penalty_value(cost_.h, std::max(x, 0.0)); }

    // Records every level the current position has reached; returns true at
    // violation. A by-jump arrival at or below zero is a violation at the
    // alarm; diffusive arrivals creep through the level.
    bool mark(PathResult& out, bool by_jump) {
        while (next_ < levels_.size() && x_ <= levels_[next_]) {
            auto& rec = out.levels[next_++];
            rec.reached = true;
            rec.discount = discount_;
            rec.integral = integral_;
            rec.violated = by_jump && x_ <= 0.0 ? 1.0 : 0.0;
        }
        return x_ <= 0.0;
    }

    void accumulate(double step, double x_new, double factor) {
        if (unit_penalty_) {
            integral_ += cost_.q > 0.0 ? discount_ * -std::expm1(-cost_.q * step) / cost_.q : step;
        } else {
            integral_ += 0.5 * step * (discount_ * penalty(x_) + discount_ * factor * penalty(x_new));
        }
    }

    // Euler grid for the Gaussian part up to time `until`; returns true on
    // violation.
    bool diffuse_until(PathRng& rng, double until, PathResult& out) {
        while (t_ < until) {
            const bool full = until - t_ > dt_;
            const double step = full ? dt_ : until - t_;
            const double factor = full ? step_discount_ : std::exp(-cost_.q * step);
            const double x_new = x_ + m_.mu * step + m_.sigma * (full ? sqrt_dt_ : std::sqrt(step)) * rng.normal();
            accumulate(step, x_new, factor);
            x_ = x_new;
            t_ = full ? t_ + step : until;
            discount_ *= factor;
            if (mark(out, false)) return true;
        }
        return false;
    }

    // Pure drift (sigma = 0, mu > 0): no level can be reached between jumps.
    void drift_until(double until) {
        const double span = until - t_;
        if (!(span > 0.0)) return;
        if (unit_penalty_) {
            accumulate(span, x_ + m_.mu * span, std::exp(-cost_.q * span));
            x_ += m_.mu * span;
            discount_ *= std::exp(-cost_.q * span);
        } else {
            const auto n = static_cast<std::size_t>(std::ceil(span / dt_));
            const double step = span / static_cast<double>(n);
            const double factor = std::exp(-cost_.q * step);
            for (std::size_t i = 0; i < n; ++i) {
                const double x_new = x_ + m_.mu * step;
                accumulate(step, x_new, factor);
                x_ = x_new;
                discount_ *= factor;
            }
        }
        t_ = until;
    }

    JumpDiffusion m_;
    const CostSpec& cost_;
    const std::vector<double>& levels_;
    double x0_, dt_, t_max_;
    bool unit_penalty_;
    double step_discount_, sqrt_dt_;

    std::size_t next_ = 0;
    double t_ = 0.0, x_ = 0.0, discount_ = 1.0, integral_ = 0.0;
};

// Mean / M2 accumulators merged in a fixed order (Chan et al.).
struct Moments {
    double n = 0.0, mean = 0.0, m2 = 0.0;
    void add(double v) {
        n += 1.0;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }
};

struct ChunkStats {
    std::vector<Moments> r, h, u, to;  // per level
    double truncated = 0.0;
};

} // namespace

double grid_monitoring_shift(double sigma, double dt) {
    return kBarrierShiftConstant * sigma * std::sqrt(dt);
}

double monitoring_allowance(const std::function<double(double, double)>& f, double x0, double A, double d) {
    if (!(d > 0.0)) return 0.0;
    const double exact = f(x0, A);
    const double alarm = f(x0, A >= d ? A - d : A + d) - exact;
    const double violation = f(x0 + d, A + d) - exact;
    return std::abs(alarm) + std::abs(violation);
}

double resolved_t_max(const SimModel& model, const SimConfig& cfg) {
    if (cfg.t_max > 0.0) return cfg.t_max;
    const double drift = to_jump_diffusion(model).mean_drift;
    return 50.0 / std::abs(std::min(drift, -0.01));
}

SimulationResult simulate_thresholds(const SimModel& model, double x0, const std::vector<double>& A_levels,
                                     const CostSpec& cost, const SimConfig& cfg) {
    const JumpDiffusion jd = to_jump_diffusion(model);
    detail::require_pre(x0 > 0.0 && std::isfinite(x0), "montecarlo: x0 must be > 0");
    detail::require_pre(cfg.n_paths >= 1, "montecarlo: n_paths must be >= 1");
    detail::require_pre(cfg.dt > 0.0 && std::isfinite(cfg.dt), "montecarlo: dt must be > 0");
    detail::require(std::isfinite(cost.q) && cost.q >= 0.0, "montecarlo: q must be >= 0");
    detail::require(std::isfinite(cost.gamma) && cost.gamma >= 0.0, "montecarlo: gamma must be >= 0");
    if (A_levels.empty()) throw PreconditionError("montecarlo: at least one threshold is required");
    for (double A : A_levels) detail::require_pre(A >= 0.0 && std::isfinite(A), "montecarlo: thresholds must be >= 0");

    const double t_max = resolved_t_max(model, cfg);

    // Levels in descending order; order[i] is the position of requested level i.
    std::vector<std::size_t> perm(A_levels.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](auto a, auto b) { return A_levels[a] > A_levels[b]; });
    std::vector<double> levels(perm.size());
    std::vector<std::size_t> order(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        levels[k] = A_levels[perm[k]];
        order[perm[k]] = k;
    }
    const std::size_t n_levels = levels.size();

    const std::size_t units = cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
    const std::size_t n_chunks = (units + kChunk - 1) / kChunk;
    std::vector<ChunkStats> chunks(n_chunks);
    std::atomic<std::size_t> cursor{0};

    auto worker = [&] {
        PathSimulator sim(jd, cost, levels, x0, cfg, t_max);
        PathResult a, b;
        for (std::size_t c; (c = cursor.fetch_add(1)) < n_chunks;) {
            ChunkStats stats;
            stats.r.resize(n_levels);
            stats.h.resize(n_levels);
            stats.u.resize(n_levels);
            stats.to.resize(n_levels);
            const std::size_t end = std::min(units, (c + 1) * kChunk);
            for (std::size_t i = c * kChunk; i < end; ++i) {
                PathRng rng(cfg.seed, i, false);
                sim.run(rng, a);
                const bool pair = cfg.antithetic;
                if (pair) {
                    PathRng mirror(cfg.seed, i, true);
                    sim.run(mirror, b);
                }
                const double weight = pair ? 0.5 : 1.0;
                stats.truncated += weight * (a.truncated + (pair ? b.truncated : 0.0));
                for (std::size_t k = 0; k < n_levels; ++k) {
                    auto sample = [&](const PathResult& p, double& r, double& h, double& to) {
                        const auto& rec = p.levels[k];
                        r = rec.reached ? rec.discount * rec.violated : 0.0;
                        h = rec.reached ? p.total_integral - rec.integral : 0.0;
                        to = rec.reached ? rec.integral : p.total_integral;
                    };
                    double r, h, to;
                    sample(a, r, h, to);
                    if (pair) {
                        double r2, h2, to2;
                        sample(b, r2, h2, to2);
                        r = 0.5 * (r + r2);
                        h = 0.5 * (h + h2);
                        to = 0.5 * (to + to2);
                    }
                    stats.r[k].add(r);
                    stats.h[k].add(h);
                    stats.u[k].add(r + cost.gamma * h);
                    stats.to[k].add(to);
                }
            }
            chunks[c] = std::move(stats);
        }
    };

    unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<Moments> r(n_levels), h(n_levels), u(n_levels), to(n_levels);
    double truncated = 0.0;
    for (const auto& c : chunks) {
        for (std::size_t k = 0; k < n_levels; ++k) {
            r[k].merge(c.r[k]);
            h[k].merge(c.h[k]);
            u[k].merge(c.u[k]);
            to[k].merge(c.to[k]);
        }
        truncated += c.truncated;
    }

    std::string note;
    if (jd.sigma > 0.0) {
        std::ostringstream os;
        os.precision(6);
        os << "diffusive crossings monitored on a dt = " << cfg.dt
           << " grid without bridge correction; effective barriers sit about " << grid_monitoring_shift(jd.sigma, cfg.dt)
           << " lower";
        note = os.str();
    }
    auto finish = [&](const Moments& m) {
        Estimate e;
        e.mean = m.mean;
        e.n_effective = static_cast<std::size_t>(m.n);
        e.std_error = m.n > 1.0 ? std::sqrt(m.m2 / (m.n - 1.0) / m.n) : 0.0;
        e.bias_note = note;
        return e;
    };

    SimulationResult result;
    result.t_max = t_max;
    result.truncated_fraction = truncated / static_cast<double>(units);
    result.truncation_bound = cost.q > 0.0 ? std::exp(-cost.q * t_max) * cost.gamma / cost.q
                                           : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < A_levels.size(); ++i) {
        const std::size_t k = order[i];
        result.rows.push_back({A_levels[i], finish(r[k]), finish(h[k]), finish(u[k]), finish(to[k])});
    }
    return result;
}

ThresholdEstimate simulate_objective(const SimModel& model, double x0, double A, const CostSpec& cost,
                                     const SimConfig& cfg) {
    return simulate_thresholds(model, x0, {A}, cost, cfg).rows.front();
}

GridSearchResult grid_threshold_search(const SimModel& model, double x0, const CostSpec& cost,
                                       const std::vector<double>& A_grid, const SimConfig& cfg) {
    GridSearchResult out;
    out.table = simulate_thresholds(model, x0, A_grid, cost, cfg).rows;
    const auto best = std::min_element(out.table.begin(), out.table.end(),
                                       [](const auto& a, const auto& b) { return a.U.mean < b.U.mean; });
    out.A_best = best->A;
    return out;
}

} // namespace capalarm
