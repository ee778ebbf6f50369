#pragma once

#include <cstdint>
#include <vector>

#include "qdc/ansatz.hpp"
#include "qdc/optimizer.hpp"

namespace qdc {

struct OptimizerConfig {
    double target_infidelity = 1e-3;
    double time_limit_s = 60.0;  // per solve_layers call (one binary-search probe)
    int max_layers = 0;          // 0: 2 * d^2
    std::uint64_t seed = 0;
    int restarts = 4;
    AnnealConfig anneal;
    LocalSearchConfig local;

    /// Desk-scale defaults: 60 s probes for qubits, 600 s otherwise.
    static OptimizerConfig defaults_for(int d);
    /// d/4 hours per probe.
    static OptimizerConfig extended_budget(int d);

    int layer_cap(int d) const noexcept { return max_layers > 0 ? max_layers : 2 * d * d; }
    void validate() const;
};

struct LayerProbe {
    int layers = 0;
    double infidelity = 1.0;
    bool converged = false;
    double wall_time_s = 0.0;
};

struct CompilationResult {
    Circuit circuit;
    int layers_used = 0;
    double achieved_infidelity = 1.0;  // recomputed from circuit
    double optimizer_infidelity = 1.0;
    double wall_time_s = 0.0;
    bool converged = false;
    bool timed_out = false;
    std::uint64_t seed_used = 0;
    std::vector<double> params;
    std::vector<double> optimizer_trace;  // best objective per restart
    std::vector<LayerProbe> probes;       // binary search history
};

/// Anneals the (layers)-deep ansatz against target. Restarts use seeds
/// seed, seed+1, ... and stop at the first one reaching the target; otherwise
/// the lowest-infidelity restart (lowest seed on ties) is returned with
/// converged = false.
CompilationResult solve_layers(const ComplexMatrix& target, const QuditSystem& sys, const NativeGate& native,
                               int layers, const OptimizerConfig& cfg);

/// Binary search over [1, cfg.layer_cap(d)] for the fewest layers meeting
/// the target infidelity.
CompilationResult binary_search_layers(const ComplexMatrix& target, const QuditSystem& sys,
                                       const NativeGate& native, const OptimizerConfig& cfg);

/// Replaces every CEX(1;0,1) of a lowered circuit by the gates of a
/// pre-computed CEX decomposition.
Circuit substitute_cex(const Circuit& lowered, const Circuit& cex_solution);

/// Number of entangling gates of the given kind in a circuit.
std::size_t count_kind(const Circuit& c, GateKind kind);

}  // namespace qdc
