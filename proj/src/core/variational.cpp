#include "qdc/variational.hpp"

#include <cmath>
#include <string>

#include "qdc/error.hpp"
#include "qdc/standard_decomp.hpp"

namespace qdc {

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

OptimizerConfig OptimizerConfig::defaults_for(int d) {
    OptimizerConfig cfg;
    cfg.time_limit_s = d <= 2 ? 60.0 : 600.0;
    return cfg;
}

OptimizerConfig OptimizerConfig::extended_budget(int d) {
    OptimizerConfig cfg;
    cfg.time_limit_s = 3600.0 * d / 4.0;
    return cfg;
}

void OptimizerConfig::validate() const {
    if (!(target_infidelity > 0.0 && target_infidelity < 1.0))
        throw Error(ErrorCode::InvalidArgument, "target infidelity must lie in (0, 1)");
    if (max_layers < 0) throw Error(ErrorCode::InvalidArgument, "max_layers must be >= 1");
    if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
    if (!(time_limit_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "time limit must be positive");
}

CompilationResult solve_layers(const ComplexMatrix& target, const QuditSystem& sys, const NativeGate& native,
                               int layers, const OptimizerConfig& cfg) {
    cfg.validate();
    if (layers < 1) throw Error(ErrorCode::InvalidArgument, "solve_layers needs layers >= 1");
    if (static_cast<int>(target.dim()) != sys.dim())
        throw Error(ErrorCode::DimensionMismatch, "target dimension does not match the qudit system");

    const auto start = Clock::now();
    AnsatzSpec spec = AnsatzSpec::make(sys, layers, native);
    const ObjectiveFn f = [&](std::span<const double> x) { return objective(spec, x, target); };
    StopCriteria stop;
    stop.target = cfg.target_infidelity;
    stop.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(cfg.time_limit_s));

    CompilationResult best;
    bool have_best = false;
    bool timed_out = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
        const auto run = dual_annealing(f, spec.bounds, seed, cfg.anneal, cfg.local, stop);
        best.optimizer_trace.push_back(run.f);
        timed_out = timed_out || run.timed_out;
        // Strictly lower infidelity wins, so ties keep the lower seed.
        if (!have_best || run.f < best.optimizer_infidelity) {
            have_best = true;
            best.optimizer_infidelity = run.f;
            best.params = run.x;
            best.seed_used = seed;
        }
        if (run.reached_target || run.timed_out) break;
    }

    spec.params = best.params;
    best.circuit = ansatz_circuit(spec);
    best.circuit.provenance = Provenance{"", "compile-" + native.name()};
    best.layers_used = layers;
    best.achieved_infidelity = 1.0 - fidelity(evaluate(best.circuit), target).value;
    best.converged = best.achieved_infidelity <= cfg.target_infidelity;
    best.timed_out = timed_out && !best.converged;
    best.wall_time_s = seconds_since(start);
    best.probes.push_back({layers, best.achieved_infidelity, best.converged, best.wall_time_s});
    return best;
}

CompilationResult binary_search_layers(const ComplexMatrix& target, const QuditSystem& sys,
                                       const NativeGate& native, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto start = Clock::now();
    int lo = 1;
    int hi = cfg.layer_cap(std::max(sys.d1, sys.d2));
    std::optional<CompilationResult> success;
    std::optional<CompilationResult> closest;
    std::vector<LayerProbe> probes;
    while (lo <= hi) {
        const int mid = lo + (hi - lo) / 2;
        auto r = solve_layers(target, sys, native, mid, cfg);
        probes.push_back(r.probes.front());
        if (r.converged) {
            hi = mid - 1;
            success = std::move(r);
        } else {
            lo = mid + 1;
            if (!closest || r.achieved_infidelity < closest->achieved_infidelity) closest = std::move(r);
        }
    }
    CompilationResult out = success ? std::move(*success) : std::move(*closest);
    out.probes = std::move(probes);
    out.wall_time_s = seconds_since(start);
    return out;
}

Circuit substitute_cex(const Circuit& lowered, const Circuit& cex_solution) {
    if (!(lowered.system == cex_solution.system))
        throw Error(ErrorCode::DimensionMismatch, "CEX solution was compiled for a different qudit system");
    const auto cex = standard_cex();
    Circuit out(lowered.system);
    out.provenance = lowered.provenance;
    for (const auto& g : lowered.gates) {
        if (const auto* c = std::get_if<gates::CEX>(&g)) {
            if (c->control != cex.control || !(c->targets == cex.targets))
                throw Error(ErrorCode::InvalidArgument, "only the standardized CEX(1;0,1) can be substituted");
            out.gates.insert(out.gates.end(), cex_solution.gates.begin(), cex_solution.gates.end());
        } else {
            out.gates.push_back(g);
        }
    }
    return out;
}

std::size_t count_kind(const Circuit& c, GateKind kind) {
    std::size_t n = 0;
    for (const auto& g : c.gates)
        if (kind_of(g) == kind) ++n;
    return n;
}

}  // namespace qdc
