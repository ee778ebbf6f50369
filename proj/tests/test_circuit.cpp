#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qdc/circuit.hpp"
#include "qdc/error.hpp"

using namespace qdc;
using oracle::kPi;

namespace {

std::vector<QuditSystem> systems() { return {{2, 2}, {3, 3}, {4, 4}, {2, 3}, {3, 2}}; }

// Oracle matrix of every gate kind, built without gate_matrix().
ComplexMatrix reference(const Gate& g, const QuditSystem& s) {
    const auto D = static_cast<std::size_t>(s.dim());
    if (auto* r = std::get_if<gates::LocalR>(&g)) {
        const auto d = static_cast<std::size_t>(s.qudit_dim(r->qudit));
        return oracle::on_qudit(r->qudit, s.d1, s.d2,
                                oracle::embed(d, r->levels.first, r->levels.second, oracle::rot(r->theta, r->phi)));
    }
    if (auto* z = std::get_if<gates::PhaseZ>(&g)) {
        const auto d = static_cast<std::size_t>(s.qudit_dim(z->qudit));
        return oracle::on_qudit(z->qudit, s.d1, s.d2,
                                oracle::embed(d, z->levels.first, z->levels.second, oracle::zrot(z->theta)));
    }
    if (auto* p = std::get_if<gates::Perm>(&g)) {
        const auto d = static_cast<std::size_t>(s.qudit_dim(p->qudit));
        return oracle::on_qudit(p->qudit, s.d1, s.d2,
                                oracle::embed(d, p->levels.first, p->levels.second, oracle::sigma_x()));
    }
    if (auto* h = std::get_if<gates::EmbeddedH>(&g)) {
        const auto d = static_cast<std::size_t>(s.qudit_dim(h->qudit));
        return oracle::on_qudit(h->qudit, s.d1, s.d2,
                                oracle::embed(d, h->levels.first, h->levels.second, oracle::hadamard()));
    }
    if (auto* c = std::get_if<gates::CRot>(&g))
        return oracle::crot(s.d1, s.d2, c->control, c->targets.first, c->targets.second, c->theta, c->phi);
    if (auto* p = std::get_if<gates::PSwap>(&g))
        return oracle::pswap(s.d1, s.d2, p->levels.first, p->levels.second, p->theta, p->phi);
    if (auto* c = std::get_if<gates::CEX>(&g))
        return oracle::cex(s.d1, s.d2, c->control, c->targets.first, c->targets.second);
    if (auto* m = std::get_if<gates::MS>(&g)) return oracle::ms(s.d1, m->theta);
    if (auto* l = std::get_if<gates::LS>(&g)) return oracle::ls(s.d1, l->theta);
    if (auto* v = std::get_if<gates::VirtualR>(&g))
        return oracle::embed(D, v->level, v->level + 1, oracle::rot(v->theta, v->phi));
    return *std::get<gates::Custom>(g).matrix;
}

std::vector<Gate> random_gates(const QuditSystem& s, std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> ang(-4 * kPi, 4 * kPi);
    std::vector<Gate> out;
    auto pair_in = [&](int d) {
        std::uniform_int_distribution<int> lv(0, d - 1);
        int a = lv(rng), b = lv(rng);
        while (b == a) b = lv(rng);
        return LevelPair{a, b};
    };
    for (int i = 0; i < count; ++i) {
        const int q = 1 + i % 2;
        const int dq = s.qudit_dim(q);
        switch (i % 10) {
            case 0: out.push_back(gates::LocalR{q, pair_in(dq), ang(rng), ang(rng)}); break;
            case 1: out.push_back(gates::PhaseZ{q, pair_in(dq), ang(rng)}); break;
            case 2: out.push_back(gates::Perm{q, pair_in(dq)}); break;
            case 3: out.push_back(gates::EmbeddedH{q, pair_in(dq)}); break;
            case 4: {
                std::uniform_int_distribution<int> c(0, s.d1 - 1);
                out.push_back(gates::CRot{c(rng), pair_in(s.d2), ang(rng), ang(rng)});
                break;
            }
            case 5: {
                std::uniform_int_distribution<int> blk(0, s.d1 - 2);
                std::uniform_int_distribution<int> lv(0, s.d2 - 1);
                const int b = blk(rng);
                out.push_back(gates::PSwap{{s.d2 * b + lv(rng), s.d2 * (b + 1) + lv(rng)}, ang(rng), ang(rng)});
                break;
            }
            case 6: {
                std::uniform_int_distribution<int> c(0, s.d1 - 1);
                out.push_back(gates::CEX{c(rng), pair_in(s.d2)});
                break;
            }
            case 7:
                if (s.equal_dims()) out.push_back(gates::MS{ang(rng)});
                break;
            case 8:
                if (s.equal_dims()) out.push_back(gates::LS{ang(rng)});
                break;
            case 9: {
                std::uniform_int_distribution<int> lv(0, s.dim() - 2);
                out.push_back(gates::VirtualR{lv(rng), ang(rng), ang(rng)});
                break;
            }
        }
    }
    return out;
}

}  // namespace

TEST(GateMatrix, MatchesOraclesForEveryKind) {
    std::mt19937_64 rng(17);
    for (const auto& s : systems()) {
        for (const auto& g : random_gates(s, rng, 60)) {
            const auto m = gate_matrix(g, s);
            EXPECT_LT(max_abs_diff(m, reference(g, s)), 1e-12) << kind_name(kind_of(g)) << " d=" << s.d1 << "x"
                                                              << s.d2;
        }
    }
}

TEST(GateMatrix, UnitaryToTightTolerance) {
    std::mt19937_64 rng(23);
    for (const auto& s : systems())
        for (const auto& g : random_gates(s, rng, 100)) EXPECT_LT(oracle::unitarity_error(gate_matrix(g, s)), 1e-12);
}

TEST(GateMatrix, RotationClosedForm) {
    // R(theta, phi) = [[c, s(-i cos phi - sin phi)], [s(-i cos phi + sin phi), c]].
    for (double th : {0.3, 1.7, -2.2})
        for (double ph : {0.0, 0.9, -2.5}) {
            const auto r = rotation_2x2(th, ph);
            const double c = std::cos(th / 2), s = std::sin(th / 2);
            EXPECT_LT(std::abs(r[0] - c), 1e-15);
            EXPECT_LT(std::abs(r[1] - s * Complex(-std::sin(ph), -std::cos(ph))), 1e-15);
            EXPECT_LT(std::abs(r[2] - s * Complex(std::sin(ph), -std::cos(ph))), 1e-15);
            EXPECT_LT(std::abs(r[3] - c), 1e-15);
        }
}

TEST(GateMatrix, MsBlockStructure) {
    const QuditSystem s{3, 3};
    const double th = 1.1;
    const auto m = gate_matrix(gates::MS{th}, s);
    const Complex g = std::exp(Complex(0, -th / 4));
    // |00> (0) <-> |11> (4) and |01> (1) <-> |10> (3) mix; everything else picks up e^{-i th/4}.
    EXPECT_LT(std::abs(m(0, 0) - g * std::cos(th / 4)), 1e-15);
    EXPECT_LT(std::abs(m(4, 0) - g * Complex(0, -std::sin(th / 4))), 1e-15);
    EXPECT_LT(std::abs(m(3, 1) - g * Complex(0, -std::sin(th / 4))), 1e-15);
    EXPECT_LT(std::abs(m(8, 8) - g), 1e-15);
    EXPECT_LT(std::abs(m(2, 2) - g), 1e-15);
}

TEST(GateMatrix, LsAtPiIsDiagonalSign) {
    for (int d : {2, 3, 4}) {
        const auto m = gate_matrix(gates::LS{kPi}, {d, d});
        for (int i = 0; i < d * d; ++i) {
            const bool ii = i / d == i % d;
            EXPECT_LT(std::abs(m(i, i) - Complex(ii ? -1.0 : 1.0)), 1e-15);
        }
    }
}

TEST(GateMatrix, CsumAndCexNamed) {
    for (int d : {2, 3, 4}) {
        EXPECT_EQ(build_named("CSUM", {d, d}), oracle::csum(d));
        EXPECT_EQ(build_named("CEX", {d, d}), oracle::cex(d, d, 1, 0, 1));
        const std::vector<double> p = {0, 1, 2};
        if (d > 2) EXPECT_EQ(build_named("CEX", {d, d}, p), oracle::cex(d, d, 0, 1, 2));
        EXPECT_EQ(build_named("IDENTITY", {d, d}), ComplexMatrix::identity(d * d));
        EXPECT_LT(max_abs_diff(build_named("LS", {d, d}), oracle::ls(d, kPi)), 1e-15);
    }
    EXPECT_THROW(build_named("CSUM", {2, 3}), Error);
    EXPECT_THROW(build_named("NOPE", {2, 2}), Error);
}

TEST(ApplyLeft, AgreesWithDenseProduct) {
    std::mt19937_64 rng(31);
    for (const auto& s : systems()) {
        ComplexMatrix acc = oracle::random_unitary(s.dim(), rng);
        ComplexMatrix dense = acc;
        for (const auto& g : random_gates(s, rng, 50)) {
            apply_left(g, s, acc);
            dense = oracle::mul(reference(g, s), dense);
        }
        EXPECT_LT(max_abs_diff(acc, dense), 1e-11);
    }
}

TEST(ApplyLeft, CustomGateUsesDenseFallback) {
    std::mt19937_64 rng(5);
    const QuditSystem s{2, 3};
    auto m = std::make_shared<const ComplexMatrix>(oracle::random_unitary(6, rng));
    ComplexMatrix acc = ComplexMatrix::identity(6);
    apply_left(gates::Custom{"u", m}, s, acc);
    EXPECT_EQ(acc, *m);
    EXPECT_THROW(validate_gate(gates::Custom{"u", m}, QuditSystem{2, 2}), Error);
}

TEST(ZIdentity, ThirtyTwoPointGrid) {
    // Z(t) = R(pi/2,0) R(t,pi/2) R(-pi/2,0): applied right to left.
    for (int d : {2, 3}) {
        const QuditSystem s{d, d};
        for (int k = 0; k < 32; ++k) {
            const double t = -2 * kPi + 4 * kPi * k / 31.0;
            Circuit c(s);
            c.append(gates::LocalR{1, {0, 1}, -kPi / 2, 0.0});
            c.append(gates::LocalR{1, {0, 1}, t, kPi / 2});
            c.append(gates::LocalR{1, {0, 1}, kPi / 2, 0.0});
            const auto want = oracle::on_qudit(1, d, d, oracle::embed(d, 0, 1, oracle::zrot(t)));
            EXPECT_LT(oracle::phase_free_diff(evaluate(c), want), 1e-12) << "t=" << t;
            EXPECT_LT(oracle::phase_free_diff(gate_matrix(gates::PhaseZ{1, {0, 1}, t}, s), want), 1e-12);
        }
    }
}

TEST(Circuit, EvaluateOrderIsApplicationOrder) {
    const QuditSystem s{3, 3};
    Circuit c(s);
    const Gate a = gates::LocalR{1, {0, 1}, 0.7, 0.2};
    const Gate b = gates::CEX{1, {0, 2}};
    c.append(a);
    c.append(b);
    EXPECT_LT(max_abs_diff(evaluate(c), oracle::mul(reference(b, s), reference(a, s))), 1e-14);
    EXPECT_EQ(evaluate(Circuit(s)), ComplexMatrix::identity(9));
}

TEST(Circuit, NormalizationPreservesMatrices) {
    std::mt19937_64 rng(41);
    for (const auto& s : systems())
        for (const auto& g : random_gates(s, rng, 40)) {
            const Gate n = normalized(g);
            EXPECT_LT(max_abs_diff(gate_matrix(n, s), gate_matrix(g, s)), 1e-12) << kind_name(kind_of(g));
        }
    const Gate ls = normalized(gates::LS{7 * kPi});
    EXPECT_NEAR(std::get<gates::LS>(ls).theta, kPi, 1e-12);
    const Gate ms = normalized(gates::MS{9 * kPi});
    EXPECT_NEAR(std::get<gates::MS>(ms).theta, kPi, 1e-12);
}

TEST(Circuit, ValidationErrors) {
    const QuditSystem s23{2, 3};
    EXPECT_THROW(validate_gate(gates::MS{1.0}, s23), Error);
    EXPECT_THROW(validate_gate(gates::LS{1.0}, s23), Error);
    EXPECT_THROW(validate_gate(gates::LocalR{1, {0, 2}, 1.0, 0.0}, s23), Error);
    EXPECT_NO_THROW(validate_gate(gates::LocalR{2, {0, 2}, 1.0, 0.0}, s23));
    EXPECT_THROW(validate_gate(gates::LocalR{3, {0, 1}, 1.0, 0.0}, s23), Error);
    EXPECT_THROW(validate_gate(gates::CRot{0, {1, 1}, 1.0, 0.0}, s23), Error);
    EXPECT_THROW(validate_gate(gates::PSwap{{0, 2}, 1.0, 0.0}, s23), Error);
    EXPECT_NO_THROW(validate_gate(gates::PSwap{{2, 3}, 1.0, 0.0}, s23));
    EXPECT_THROW(validate_gate(gates::CEX{2, {0, 1}}, s23), Error);
    EXPECT_THROW(validate_gate(gates::VirtualR{5, 1.0, 0.0}, s23), Error);
    EXPECT_THROW(validate_gate(gates::LocalR{1, {0, 1}, std::nan(""), 0.0}, s23), Error);
    EXPECT_THROW((QuditSystem{1, 3}.validate()), Error);
}

TEST(Circuit, CountsAndNames) {
    const QuditSystem s{3, 3};
    Circuit c(s);
    c.append(gates::CEX{1, {0, 1}});
    c.append(gates::CEX{1, {0, 1}});
    c.append(gates::LS{kPi});
    const auto counts = count_gates(c);
    EXPECT_EQ(counts.at(GateKind::CEX), 2u);
    EXPECT_EQ(counts.at(GateKind::LS), 1u);
    EXPECT_EQ(counts.count(GateKind::MS), 0u);
    for (int k = 0; k <= static_cast<int>(GateKind::Custom); ++k) {
        const auto kind = static_cast<GateKind>(k);
        EXPECT_EQ(kind_from_name(kind_name(kind)), kind);
    }
    EXPECT_FALSE(kind_from_name("Toffoli").has_value());
}
