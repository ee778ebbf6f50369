#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdc/su_d.hpp"

namespace qdc {

using ObjectiveFn = std::function<double(std::span<const double>)>;
using Clock = std::chrono::steady_clock;

/// Bounded quasi-Newton refinement settings.
struct LocalSearchConfig {
    int max_iterations = 0;  // 0: min(max(6 * n, 100), 1000)
    double gradient_tolerance = 1e-8;
    double function_tolerance = 1e-10;  // relative decrease per iteration
    double fd_step = 1e-7;              // central differences
    int memory = 10;
};

/// Generalized simulated annealing settings.
struct AnnealConfig {
    double initial_temperature = 5230.0;
    double visiting = 2.62;
    double acceptance = -5.0;
    double restart_temperature_ratio = 2e-5;
    int max_iterations = 1000;
};

struct StopCriteria {
    std::optional<double> target;  // stop once f <= target
    std::optional<Clock::time_point> deadline;
};

struct LocalResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    long evaluations = 0;
    bool hit_deadline = false;
};

struct AnnealResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    long evaluations = 0;
    int local_searches = 0;
    bool reached_target = false;
    bool timed_out = false;
    std::vector<double> best_trace;  // best f after each annealing iteration
};

/// Central finite-difference gradient.
std::vector<double> fd_gradient(const ObjectiveFn& f, std::span<const double> x, double step,
                                long* evaluations = nullptr);

/// Projected L-BFGS on a box: variables pinned at a bound by the gradient are
/// held fixed, the two-loop direction is built on the free set, and an
/// Armijo backtracking search runs along the projected path.
LocalResult minimize_bounded_lbfgs(const ObjectiveFn& f, std::vector<double> x0,
                                   std::span<const ParamBound> bounds, const LocalSearchConfig& cfg,
                                   const StopCriteria& stop = {});

/// Dual annealing: Tsallis-Stariolo visiting distribution, generalized
/// Metropolis acceptance, temperature restarts, and bounded L-BFGS refinement
/// whenever the chain improves the best point. Deterministic for a seed.
/// Throws Error(Internal) on a non-finite objective value.
AnnealResult dual_annealing(const ObjectiveFn& f, std::span<const ParamBound> bounds, std::uint64_t seed,
                            const AnnealConfig& anneal, const LocalSearchConfig& local,
                            const StopCriteria& stop = {});

}  // namespace qdc
