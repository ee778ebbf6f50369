#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdc/error.hpp"
#include "qdc/standard_decomp.hpp"
#include "qdc/variational.hpp"

using namespace qdc;
using oracle::kPi;

namespace {

OptimizerConfig quick(double target, double seconds) {
    OptimizerConfig cfg;
    cfg.target_infidelity = target;
    cfg.time_limit_s = seconds;
    return cfg;
}

}  // namespace

TEST(SolveLayers, CexOverCexIsExact) {
    for (int d : {2, 3}) {
        const QuditSystem s{d, d};
        const auto target = oracle::cex(d, d, 1, 0, 1);
        const auto r = solve_layers(target, s, NativeGate::cex(), 1, quick(1e-10, 60));
        EXPECT_TRUE(r.converged);
        EXPECT_LT(r.achieved_infidelity, 1e-10);
        EXPECT_NEAR(r.achieved_infidelity, r.optimizer_infidelity, 1e-10);
        EXPECT_NEAR(r.achieved_infidelity, 1.0 - oracle::fid(evaluate(r.circuit), target), 1e-12);
        EXPECT_EQ(count_kind(r.circuit, GateKind::CEX), 1u);
        EXPECT_EQ(r.layers_used, 1);
        EXPECT_FALSE(r.optimizer_trace.empty());
    }
}

TEST(SolveLayers, QubitCnotOverFreeAngleLs) {
    // At d = 2, LS(pi) = -Z (x) Z is local, but a free LS angle gives a ZZ
    // interaction that reaches CNOT in one layer.
    const QuditSystem s{2, 2};
    const auto r = solve_layers(oracle::cex(2, 2, 1, 0, 1), s, NativeGate::ls(kPi, true), 1, quick(1e-8, 60));
    EXPECT_TRUE(r.converged) << r.achieved_infidelity;
    EXPECT_EQ(count_kind(r.circuit, GateKind::LS), 1u);
}

TEST(SolveLayers, SeededDeterminism) {
    const QuditSystem s{2, 2};
    OptimizerConfig cfg = quick(1e-6, 60);
    cfg.seed = 11;
    const auto target = oracle::cex(2, 2, 1, 0, 1);
    const auto a = solve_layers(target, s, NativeGate::ms(), 1, cfg);
    const auto b = solve_layers(target, s, NativeGate::ms(), 1, cfg);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.optimizer_trace, b.optimizer_trace);
    EXPECT_EQ(a.seed_used, b.seed_used);
}

TEST(SolveLayers, TimeoutIsAValue) {
    // LS(pi) is local on qubits, so no layer count reaches CNOT.
    const QuditSystem s{2, 2};
    OptimizerConfig cfg = quick(1e-9, 0.5);
    const auto start = Clock::now();
    const auto r = solve_layers(oracle::cex(2, 2, 1, 0, 1), s, NativeGate::ls(), 2, cfg);
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    EXPECT_FALSE(r.converged);
    EXPECT_GT(r.achieved_infidelity, 0.1);
    EXPECT_LT(elapsed, 10.0);
    EXPECT_FALSE(r.params.empty());
}

TEST(SolveLayers, RejectsBadArguments) {
    const QuditSystem s{2, 2};
    EXPECT_THROW(solve_layers(oracle::eye(4), s, NativeGate::cex(), 0, quick(1e-3, 1)), Error);
    EXPECT_THROW(solve_layers(oracle::eye(9), s, NativeGate::cex(), 1, quick(1e-3, 1)), Error);
    EXPECT_THROW(solve_layers(oracle::eye(4), s, NativeGate::cex(), 1, quick(0.0, 1)), Error);
    EXPECT_THROW(solve_layers(oracle::eye(4), s, NativeGate::cex(), 1, quick(1.0, 1)), Error);
}

TEST(BinarySearch, ExactlyRepresentableAtOneLayer) {
    const QuditSystem s{3, 3};
    const auto r = binary_search_layers(oracle::cex(3, 3, 1, 0, 1), s, NativeGate::cex(), quick(1e-6, 60));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.layers_used, 1);
    // Cap 2 d^2 = 18: probes 9, 4, 2, 1.
    ASSERT_EQ(r.probes.size(), 4u);
    EXPECT_EQ(r.probes[0].layers, 9);
    EXPECT_EQ(r.probes.back().layers, 1);
}

TEST(BinarySearch, FailureReturnsBestWithFlag) {
    const QuditSystem s{2, 2};
    OptimizerConfig cfg = quick(1e-9, 0.3);
    cfg.max_layers = 2;
    const auto r = binary_search_layers(oracle::cex(2, 2, 1, 0, 1), s, NativeGate::ls(), cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.probes.size(), 2u);
    for (const auto& p : r.probes) EXPECT_GE(p.infidelity, r.achieved_infidelity);
}

TEST(SubstituteCex, MultipliesNativeCounts) {
    const QuditSystem s{3, 3};
    Circuit solution(s);
    for (int i = 0; i < 2; ++i) {
        solution.append(gates::LocalR{1, {0, 1}, 0.3, 0.1});
        solution.append(gates::LS{kPi});
    }
    Circuit lowered(s);
    for (int i = 0; i < 5; ++i) {
        lowered.append(gates::PhaseZ{2, {0, 1}, 0.2 * i});
        lowered.append(standard_cex());
    }
    const Circuit out = substitute_cex(lowered, solution);
    EXPECT_EQ(count_kind(out, GateKind::LS), 10u);
    EXPECT_EQ(count_kind(out, GateKind::CEX), 0u);
    EXPECT_EQ(count_kind(out, GateKind::PhaseZ), 5u);

    Circuit none(s);
    none.append(gates::Perm{1, {0, 2}});
    const Circuit same = substitute_cex(none, solution);
    EXPECT_EQ(same.size(), 1u);
    EXPECT_EQ(evaluate(same), evaluate(none));
}

TEST(SubstituteCex, ExactSolutionPreservesUnitary) {
    const QuditSystem s{3, 3};
    Circuit lowered(s);
    lowered.append(gates::LocalR{2, {0, 2}, 0.4, 0.9});
    lowered.append(standard_cex());
    lowered.append(gates::PhaseZ{1, {1, 2}, 1.3});
    lowered.append(standard_cex());
    Circuit solution(s);
    solution.append(standard_cex());
    EXPECT_LT(oracle::max_diff(evaluate(substitute_cex(lowered, solution)), evaluate(lowered)), 1e-15);
}

TEST(SubstituteCex, Errors) {
    Circuit lowered(QuditSystem{3, 3});
    lowered.append(gates::CEX{0, {0, 1}});
    EXPECT_THROW(substitute_cex(lowered, Circuit(QuditSystem{3, 3})), Error);
    Circuit ok(QuditSystem{3, 3});
    ok.append(standard_cex());
    EXPECT_THROW(substitute_cex(ok, Circuit(QuditSystem{2, 2})), Error);
}
