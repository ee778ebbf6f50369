#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qdc/ansatz.hpp"
#include "qdc/error.hpp"
#include "qdc/su_d.hpp"

using namespace qdc;
using oracle::kPi;

namespace {

std::vector<double> random_params(std::span<const ParamBound> bounds, std::mt19937_64& rng) {
    std::vector<double> x;
    for (const auto& b : bounds) x.push_back(std::uniform_real_distribution<double>(b.lower, b.upper)(rng));
    return x;
}

// The ordered product written with oracle matrix exponentials of Z_{m,n} and Y_{m,n}.
ComplexMatrix su_oracle(std::span<const double> block, int d) {
    const auto n = static_cast<std::size_t>(d);
    auto zmn = [&](int a, int b) {
        ComplexMatrix z(n);
        z(a, a) = 1.0;
        z(b, b) = -1.0;
        return z;
    };
    auto ymn = [&](int a, int b) {
        ComplexMatrix y(n);
        y(a, b) = -oracle::kI;
        y(b, a) = oracle::kI;
        return y;
    };
    ComplexMatrix u = oracle::eye(n);
    std::size_t k = 0;
    for (int m = 0; m < d - 1; ++m)
        for (int q = m + 1; q < d; ++q) {
            u = oracle::mul(u, oracle::expm(oracle::scale(zmn(m, q), oracle::kI * block[k++])));
            u = oracle::mul(u, oracle::expm(oracle::scale(ymn(m, q), oracle::kI * block[k++])));
        }
    for (int l = 0; l < d - 1; ++l) u = oracle::mul(u, oracle::expm(oracle::scale(zmn(l, d - 1), oracle::kI * block[k++])));
    return u;
}

}  // namespace

TEST(LocalSuD, ZerosGiveIdentity) {
    for (int d : {2, 3, 4}) {
        const std::vector<double> zeros(su_param_count(d), 0.0);
        EXPECT_EQ(local_su_d(zeros, d), ComplexMatrix::identity(d));
        EXPECT_TRUE(su_d_gates(zeros, d, 1).empty());
    }
}

TEST(LocalSuD, QubitRotationExample) {
    // lambda_{1,0} = 0, lambda_{0,1} = pi/4, lambda_{1,1} = 0.
    const std::vector<double> block = {0.0, kPi / 4, 0.0};
    const auto u = local_su_d(block, 2);
    const double c = std::cos(kPi / 4);
    EXPECT_LT(oracle::max_diff(u, ComplexMatrix(2, {c, c, -c, c})), 1e-15);
}

TEST(LocalSuD, MatchesExponentialOracleAndIsSpecial) {
    std::mt19937_64 rng(10);
    for (int d : {2, 3, 4, 5}) {
        const auto bounds = su_bounds(d);
        ASSERT_EQ(static_cast<int>(bounds.size()), d * d - 1);
        for (int trial = 0; trial < 100; ++trial) {
            const auto x = random_params(bounds, rng);
            const auto u = local_su_d(x, d);
            EXPECT_LT(oracle::unitarity_error(u), 1e-13);
            EXPECT_LT(std::abs(determinant(u) - Complex(1.0)), 1e-12);
            if (trial < 10) EXPECT_LT(oracle::max_diff(u, su_oracle(x, d)), 1e-12);
            Circuit c(QuditSystem{d, d});
            for (auto& g : su_d_gates(x, d, 2)) c.append(g);
            EXPECT_LT(oracle::max_diff(evaluate(c), oracle::kron(oracle::eye(d), u)), 1e-12);
        }
    }
}

TEST(LocalSuD, BoundsLayout) {
    const auto b = su_bounds(3);
    ASSERT_EQ(b.size(), 8u);
    for (int k = 0; k < 6; k += 2) {
        EXPECT_DOUBLE_EQ(b[k].upper, kPi);
        EXPECT_DOUBLE_EQ(b[k + 1].upper, kPi / 2);
    }
    EXPECT_DOUBLE_EQ(b[6].upper, 2 * kPi);
    EXPECT_DOUBLE_EQ(b[7].upper, 2 * kPi);
    EXPECT_THROW(local_su_d(std::vector<double>(7, 0.0), 3), Error);
}

TEST(Ansatz, ParameterCountLaw) {
    for (int d : {2, 3, 4})
        for (int layers : {1, 2, 5, 8}) {
            const QuditSystem s{d, d};
            const std::size_t law = static_cast<std::size_t>((2 * layers + 2) * (d * d - 1));
            EXPECT_EQ(ansatz_param_count(s, layers, NativeGate::cex()), law);
            EXPECT_EQ(AnsatzSpec::make(s, layers, NativeGate::ls()).param_count(), law);
            EXPECT_EQ(AnsatzSpec::make(s, layers, NativeGate::ms(kPi, true)).param_count(), law + layers);
        }
}

TEST(Ansatz, IdentityDressingsGiveNativePowers) {
    const QuditSystem s{3, 3};
    EXPECT_LT(oracle::max_diff(build_ansatz(AnsatzSpec::make(s, 1, NativeGate::cex())), oracle::cex(3, 3, 1, 0, 1)),
              1e-15);
    EXPECT_LT(oracle::max_diff(build_ansatz(AnsatzSpec::make(s, 0, NativeGate::cex())), oracle::eye(9)), 1e-15);
    const auto ls2 = build_ansatz(AnsatzSpec::make(s, 2, NativeGate::ls()));
    EXPECT_LT(oracle::max_diff(ls2, oracle::eye(9)), 1e-14);
    EXPECT_LT(oracle::max_diff(build_ansatz(AnsatzSpec::make(s, 1, NativeGate::ms(0.7))), oracle::ms(3, 0.7)), 1e-12);
}

TEST(Ansatz, RandomParamsUnitaryAndCircuitAgrees) {
    std::mt19937_64 rng(77);
    for (const auto& native : {NativeGate::cex(), NativeGate::ms(), NativeGate::ls(), NativeGate::ms(kPi, true)}) {
        for (int d : {2, 3}) {
            AnsatzSpec spec = AnsatzSpec::make({d, d}, 2, native);
            spec.params = random_params(spec.bounds, rng);
            const auto u = build_ansatz(spec);
            EXPECT_LT(oracle::unitarity_error(u), 1e-10);
            EXPECT_LT(oracle::max_diff(evaluate(ansatz_circuit(spec)), u), 1e-11) << native.name();
            EXPECT_EQ(count_gates(ansatz_circuit(spec)).at(kind_of(native.gate())), 2u);
        }
    }
}

TEST(Ansatz, ObjectiveValues) {
    std::mt19937_64 rng(5);
    AnsatzSpec spec = AnsatzSpec::make({3, 3}, 2, NativeGate::ls());
    spec.params = random_params(spec.bounds, rng);
    EXPECT_NEAR(objective(spec, spec.params, build_ansatz(spec)), 0.0, 1e-12);

    const AnsatzSpec cex1 = AnsatzSpec::make({3, 3}, 1, NativeGate::cex());
    EXPECT_NEAR(objective(cex1, cex1.params, oracle::cex(3, 3, 1, 0, 1)), 0.0, 1e-15);

    const auto target = oracle::random_unitary(9, rng);
    const AnsatzSpec id = AnsatzSpec::make({3, 3}, 0, NativeGate::cex());
    EXPECT_NEAR(objective(id, id.params, target), 1.0 - std::abs(trace(target)) / 9.0, 1e-12);
    EXPECT_THROW(objective(id, id.params, oracle::eye(4)), Error);

    for (int i = 0; i < 20; ++i) {
        const auto x = random_params(spec.bounds, rng);
        const double f = objective(spec, x, target);
        EXPECT_GE(f, -1e-12);
        EXPECT_LE(f, 1.0 + 1e-12);
    }
}

TEST(Ansatz, RejectsIncompatibleNative) {
    EXPECT_THROW(AnsatzSpec::make({2, 3}, 1, NativeGate::ls()), Error);
    EXPECT_THROW(AnsatzSpec::make({2, 3}, 1, NativeGate::ms()), Error);
    EXPECT_NO_THROW(AnsatzSpec::make({2, 3}, 1, NativeGate::cex()));
    AnsatzSpec spec = AnsatzSpec::make({3, 3}, 1, NativeGate::cex());
    spec.params.pop_back();
    EXPECT_THROW(spec.validate(), Error);
    EXPECT_THROW(build_ansatz(spec), Error);
}

TEST(Ansatz, CustomNative) {
    std::mt19937_64 rng(8);
    const auto m = oracle::random_unitary(6, rng);
    const AnsatzSpec spec = AnsatzSpec::make({2, 3}, 1, NativeGate::custom_matrix("u", m));
    EXPECT_LT(oracle::max_diff(build_ansatz(spec), m), 1e-15);
    EXPECT_THROW(AnsatzSpec::make({2, 2}, 1, NativeGate::custom_matrix("u", m)), Error);
}

TEST(Ansatz, WarmStartPreservesObjective) {
    std::mt19937_64 rng(13);
    const auto target = oracle::cex(3, 3, 1, 0, 1);
    for (const auto& native : {NativeGate::ms(kPi, true), NativeGate::ls(kPi, true)}) {
        for (int layers : {1, 2, 3}) {
            AnsatzSpec spec = AnsatzSpec::make({3, 3}, layers, native);
            spec.params = random_params(spec.bounds, rng);
            const double f = objective(spec, spec.params, target);
            AnsatzSpec bigger = AnsatzSpec::make({3, 3}, layers + 1, native);
            bigger.params = warm_start_params(spec);
            ASSERT_EQ(bigger.params.size(), bigger.param_count());
            EXPECT_NEAR(objective(bigger, bigger.params, target), f, 1e-12);
        }
    }
    EXPECT_THROW(warm_start_params(AnsatzSpec::make({3, 3}, 1, NativeGate::ls())), Error);
}
