#include "qdc/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdc/error.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

double reduce_angle(double x, double period) {
    if (x > -2.0 * kPi && x <= 2.0 * kPi) return x;
    if (!std::isfinite(x)) return x;
    double r = std::fmod(x, period);
    if (r > period / 2.0) r -= period;
    if (r <= -period / 2.0) r += period;
    return r;
}

void check_finite(double x, const char* what) {
    if (!std::isfinite(x)) invalid(std::string(what) + " must be finite");
}

void check_level_pair(const LevelPair& p, int dim, const char* what) {
    if (p.first < 0 || p.first >= dim || p.second < 0 || p.second >= dim)
        invalid(std::string(what) + " level out of range (dim " + std::to_string(dim) + ")");
    if (p.first == p.second) invalid(std::string(what) + " levels must be distinct");
}

void check_qudit(int q) {
    if (q != 1 && q != 2) invalid("qudit index must be 1 or 2, got " + std::to_string(q));
}

// Row-pair action used by the sparse evaluation path.
struct TwoLevelBlock {
    std::size_t a;
    std::size_t b;
    std::array<Complex, 4> m;  // [[m0, m1], [m2, m3]] in (a, b) order
};

struct SparseForm {
    Complex background{1.0};  // multiplies rows not named below
    std::vector<TwoLevelBlock> blocks;
    std::vector<std::pair<std::size_t, Complex>> diagonal;
};

std::array<Complex, 4> hadamard_2x2() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}

std::array<Complex, 4> phase_2x2(double theta) {
    return {std::exp(-kI * (theta / 2.0)), 0.0, 0.0, std::exp(kI * (theta / 2.0))};
}

std::array<Complex, 4> swap_2x2() { return {0.0, 1.0, 1.0, 0.0}; }

std::array<Complex, 4> ms_block(double theta) {
    // exp(-i theta/4 (1 + XX)) restricted to a pair {|00>,|11>} or {|01>,|10>}
    const Complex g = std::exp(-kI * (theta / 4.0));
    const double c = std::cos(theta / 4.0);
    const double s = std::sin(theta / 4.0);
    return {g * c, g * (-kI * s), g * (-kI * s), g * c};
}

void add_local_blocks(SparseForm& f, const QuditSystem& sys, int qudit, LevelPair lv,
                      const std::array<Complex, 4>& m) {
    const auto d2 = static_cast<std::size_t>(sys.d2);
    if (qudit == 1) {
        for (std::size_t j = 0; j < d2; ++j)
            f.blocks.push_back({lv.first * d2 + j, lv.second * d2 + j, m});
    } else {
        for (int i = 0; i < sys.d1; ++i)
            f.blocks.push_back({i * d2 + lv.first, i * d2 + lv.second, m});
    }
}

std::optional<SparseForm> sparse_form(const Gate& g, const QuditSystem& sys) {
    const auto d2 = static_cast<std::size_t>(sys.d2);
    return std::visit(
        Overloaded{
            [&](const gates::LocalR& r) -> std::optional<SparseForm> {
                SparseForm f;
                add_local_blocks(f, sys, r.qudit, r.levels, rotation_2x2(r.theta, r.phi));
                return f;
            },
            [&](const gates::PhaseZ& z) -> std::optional<SparseForm> {
                SparseForm f;
                add_local_blocks(f, sys, z.qudit, z.levels, phase_2x2(z.theta));
                return f;
            },
            [&](const gates::Perm& p) -> std::optional<SparseForm> {
                SparseForm f;
                add_local_blocks(f, sys, p.qudit, p.levels, swap_2x2());
                return f;
            },
            [&](const gates::EmbeddedH& h) -> std::optional<SparseForm> {
                SparseForm f;
                add_local_blocks(f, sys, h.qudit, h.levels, hadamard_2x2());
                return f;
            },
            [&](const gates::CRot& c) -> std::optional<SparseForm> {
                SparseForm f;
                f.blocks.push_back({c.control * d2 + c.targets.first,
                                    c.control * d2 + c.targets.second,
                                    rotation_2x2(c.theta, c.phi)});
                return f;
            },
            [&](const gates::PSwap& p) -> std::optional<SparseForm> {
                SparseForm f;
                f.blocks.push_back({static_cast<std::size_t>(p.levels.first),
                                    static_cast<std::size_t>(p.levels.second),
                                    rotation_2x2(p.theta, p.phi)});
                return f;
            },
            [&](const gates::CEX& c) -> std::optional<SparseForm> {
                SparseForm f;
                f.blocks.push_back({c.control * d2 + c.targets.first,
                                    c.control * d2 + c.targets.second, swap_2x2()});
                return f;
            },
            [&](const gates::MS& ms) -> std::optional<SparseForm> {
                SparseForm f;
                f.background = std::exp(-kI * (ms.theta / 4.0));
                const auto m = ms_block(ms.theta);
                f.blocks.push_back({0, d2 + 1, m});
                f.blocks.push_back({1, d2, m});
                return f;
            },
            [&](const gates::LS& ls) -> std::optional<SparseForm> {
                SparseForm f;
                const Complex ph = std::exp(-kI * ls.theta);
                for (int i = 0; i < std::min(sys.d1, sys.d2); ++i)
                    f.diagonal.emplace_back(i * d2 + i, ph);
                return f;
            },
            [&](const gates::VirtualR& v) -> std::optional<SparseForm> {
                SparseForm f;
                f.blocks.push_back({static_cast<std::size_t>(v.level),
                                    static_cast<std::size_t>(v.level) + 1,
                                    rotation_2x2(v.theta, v.phi)});
                return f;
            },
            [&](const gates::Custom&) -> std::optional<SparseForm> { return std::nullopt; },
        },
        g);
}

ComplexMatrix embed_single(int dim, LevelPair lv, const std::array<Complex, 4>& m) {
    ComplexMatrix out = ComplexMatrix::identity(dim);
    out(lv.first, lv.first) = m[0];
    out(lv.first, lv.second) = m[1];
    out(lv.second, lv.first) = m[2];
    out(lv.second, lv.second) = m[3];
    return out;
}

ComplexMatrix local_on(const QuditSystem& sys, int qudit, LevelPair lv,
                       const std::array<Complex, 4>& m) {
    if (qudit == 1)
        return kron(embed_single(sys.d1, lv, m), ComplexMatrix::identity(sys.d2));
    return kron(ComplexMatrix::identity(sys.d1), embed_single(sys.d2, lv, m));
}

ComplexMatrix block_on(int dim, std::size_t a, std::size_t b, const std::array<Complex, 4>& m) {
    return embed_single(dim, LevelPair{static_cast<int>(a), static_cast<int>(b)}, m);
}

}  // namespace

int QuditSystem::qudit_dim(int qudit) const {
    check_qudit(qudit);
    return qudit == 1 ? d1 : d2;
}

void QuditSystem::validate() const {
    if (d1 < 2 || d2 < 2)
        invalid("qudit dimensions must be >= 2, got (" + std::to_string(d1) + ", " +
                std::to_string(d2) + ")");
}

GateKind kind_of(const Gate& g) noexcept { return static_cast<GateKind>(g.index()); }

std::string_view kind_name(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::LocalR: return "LocalR";
        case GateKind::PhaseZ: return "PhaseZ";
        case GateKind::Perm: return "Perm";
        case GateKind::EmbeddedH: return "EmbeddedH";
        case GateKind::CRot: return "CRot";
        case GateKind::PSwap: return "PSwap";
        case GateKind::CEX: return "CEX";
        case GateKind::MS: return "MS";
        case GateKind::LS: return "LS";
        case GateKind::VirtualR: return "VirtualR";
        case GateKind::Custom: return "Custom";
    }
    return "?";
}

std::optional<GateKind> kind_from_name(std::string_view name) noexcept {
    for (int k = 0; k <= static_cast<int>(GateKind::Custom); ++k) {
        if (kind_name(static_cast<GateKind>(k)) == name) return static_cast<GateKind>(k);
    }
    return std::nullopt;
}

Gate normalized(Gate g) {
    std::visit(Overloaded{
                   [](gates::LocalR& r) {
                       r.theta = reduce_angle(r.theta, 4 * kPi);
                       r.phi = reduce_angle(r.phi, 2 * kPi);
                   },
                   [](gates::PhaseZ& z) { z.theta = reduce_angle(z.theta, 4 * kPi); },
                   [](gates::CRot& c) {
                       c.theta = reduce_angle(c.theta, 4 * kPi);
                       c.phi = reduce_angle(c.phi, 2 * kPi);
                   },
                   [](gates::PSwap& p) {
                       p.theta = reduce_angle(p.theta, 4 * kPi);
                       p.phi = reduce_angle(p.phi, 2 * kPi);
                   },
                   [](gates::VirtualR& v) {
                       v.theta = reduce_angle(v.theta, 4 * kPi);
                       v.phi = reduce_angle(v.phi, 2 * kPi);
                   },
                   // MS has period 8pi including its phase outside the 01 block.
                   [](gates::MS& ms) { ms.theta = reduce_angle(ms.theta, 8 * kPi); },
                   [](gates::LS& ls) { ls.theta = reduce_angle(ls.theta, 2 * kPi); },
                   [](auto&) {},
               },
               g);
    return g;
}

void validate_gate(const Gate& g, const QuditSystem& sys) {
    sys.validate();
    const int D = sys.dim();
    std::visit(Overloaded{
                   [&](const gates::LocalR& r) {
                       check_qudit(r.qudit);
                       check_level_pair(r.levels, sys.qudit_dim(r.qudit), "LocalR");
                       check_finite(r.theta, "theta");
                       check_finite(r.phi, "phi");
                   },
                   [&](const gates::PhaseZ& z) {
                       check_qudit(z.qudit);
                       check_level_pair(z.levels, sys.qudit_dim(z.qudit), "PhaseZ");
                       check_finite(z.theta, "theta");
                   },
                   [&](const gates::Perm& p) {
                       check_qudit(p.qudit);
                       check_level_pair(p.levels, sys.qudit_dim(p.qudit), "Perm");
                   },
                   [&](const gates::EmbeddedH& h) {
                       check_qudit(h.qudit);
                       check_level_pair(h.levels, sys.qudit_dim(h.qudit), "EmbeddedH");
                   },
                   [&](const gates::CRot& c) {
                       if (c.control < 0 || c.control >= sys.d1) invalid("CRot control out of range");
                       check_level_pair(c.targets, sys.d2, "CRot");
                       check_finite(c.theta, "theta");
                       check_finite(c.phi, "phi");
                   },
                   [&](const gates::PSwap& p) {
                       check_level_pair(p.levels, D, "PSwap");
                       if (p.levels.first / sys.d2 == p.levels.second / sys.d2)
                           invalid("PSwap levels must lie in different control blocks");
                       check_finite(p.theta, "theta");
                       check_finite(p.phi, "phi");
                   },
                   [&](const gates::CEX& c) {
                       if (c.control < 0 || c.control >= sys.d1) invalid("CEX control out of range");
                       check_level_pair(c.targets, sys.d2, "CEX");
                   },
                   [&](const gates::MS& ms) {
                       if (!sys.equal_dims()) invalid("MS requires equal qudit dimensions");
                       check_finite(ms.theta, "theta");
                   },
                   [&](const gates::LS& ls) {
                       if (!sys.equal_dims()) invalid("LS requires equal qudit dimensions");
                       check_finite(ls.theta, "theta");
                   },
                   [&](const gates::VirtualR& v) {
                       if (v.level < 0 || v.level > D - 2)
                           invalid("VirtualR level out of range (D " + std::to_string(D) + ")");
                       check_finite(v.theta, "theta");
                       check_finite(v.phi, "phi");
                   },
                   [&](const gates::Custom& c) {
                       if (!c.matrix) invalid("Custom gate has no matrix");
                       if (static_cast<int>(c.matrix->dim()) != D)
                           throw Error(ErrorCode::DimensionMismatch,
                                       "Custom gate dimension " + std::to_string(c.matrix->dim()) +
                                           " does not match system dimension " +
                                           std::to_string(D));
                   },
               },
               g);
}

void Circuit::extend(const Circuit& other) {
    if (!(other.system == system)) throw Error(ErrorCode::DimensionMismatch, "circuit systems differ");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

std::array<Complex, 4> rotation_2x2(double theta, double phi) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {c, s * Complex(-std::sin(phi), -std::cos(phi)),
            s * Complex(std::sin(phi), -std::cos(phi)), c};
}

ComplexMatrix gate_matrix(const Gate& g, const QuditSystem& sys) {
    validate_gate(g, sys);
    const int D = sys.dim();
    const auto d2 = static_cast<std::size_t>(sys.d2);
    return std::visit(
        Overloaded{
            [&](const gates::LocalR& r) {
                return local_on(sys, r.qudit, r.levels, rotation_2x2(r.theta, r.phi));
            },
            [&](const gates::PhaseZ& z) {
                return local_on(sys, z.qudit, z.levels, phase_2x2(z.theta));
            },
            [&](const gates::Perm& p) { return local_on(sys, p.qudit, p.levels, swap_2x2()); },
            [&](const gates::EmbeddedH& h) {
                return local_on(sys, h.qudit, h.levels, hadamard_2x2());
            },
            [&](const gates::CRot& c) {
                return block_on(D, c.control * d2 + c.targets.first,
                                c.control * d2 + c.targets.second, rotation_2x2(c.theta, c.phi));
            },
            [&](const gates::PSwap& p) {
                return block_on(D, p.levels.first, p.levels.second, rotation_2x2(p.theta, p.phi));
            },
            [&](const gates::CEX& c) {
                // permutation: column |i,j> goes to row |i, sigma_i(j)>
                ComplexMatrix m(D);
                for (int i = 0; i < sys.d1; ++i)
                    for (int j = 0; j < sys.d2; ++j) {
                        int out = j;
                        if (i == c.control && j == c.targets.first) out = c.targets.second;
                        else if (i == c.control && j == c.targets.second) out = c.targets.first;
                        m(i * d2 + out, i * d2 + j) = 1.0;
                    }
                return m;
            },
            [&](const gates::MS& ms) {
                // e^{-i theta/4} (cos(theta/4) P + I - P - i sin(theta/4) XX), P = projector on 01 (x) 01
                const Complex g0 = std::exp(-kI * (ms.theta / 4.0));
                const double c = std::cos(ms.theta / 4.0);
                const double s = std::sin(ms.theta / 4.0);
                ComplexMatrix m = ComplexMatrix::identity(D).scaled(g0);
                const std::size_t sub[4] = {0, 1, d2, d2 + 1};
                for (std::size_t k = 0; k < 4; ++k) {
                    m(sub[k], sub[k]) = g0 * c;
                    // XX flips both bits: 00<->11, 01<->10
                    m(sub[3 - k], sub[k]) = g0 * (-kI * s);
                }
                return m;
            },
            [&](const gates::LS& ls) {
                ComplexMatrix m = ComplexMatrix::identity(D);
                for (int i = 0; i < sys.d1; ++i) m(i * d2 + i, i * d2 + i) = std::exp(-kI * ls.theta);
                return m;
            },
            [&](const gates::VirtualR& v) {
                return block_on(D, v.level, v.level + 1, rotation_2x2(v.theta, v.phi));
            },
            [&](const gates::Custom& c) { return *c.matrix; },
        },
        g);
}

void apply_left(const Gate& g, const QuditSystem& sys, ComplexMatrix& acc) {
    validate_gate(g, sys);
    if (static_cast<int>(acc.dim()) != sys.dim())
        throw Error(ErrorCode::DimensionMismatch, "apply_left: accumulator dimension mismatch");
    const auto form = sparse_form(g, sys);
    if (!form) {
        acc = multiply(gate_matrix(g, sys), acc);
        return;
    }
    const std::size_t n = acc.dim();
    std::vector<char> touched;
    if (form->background != Complex{1.0}) touched.assign(n, 0);
    for (const auto& blk : form->blocks) {
        for (std::size_t col = 0; col < n; ++col) {
            const Complex x = acc(blk.a, col);
            const Complex y = acc(blk.b, col);
            acc(blk.a, col) = blk.m[0] * x + blk.m[1] * y;
            acc(blk.b, col) = blk.m[2] * x + blk.m[3] * y;
        }
        if (!touched.empty()) touched[blk.a] = touched[blk.b] = 1;
    }
    for (const auto& [row, ph] : form->diagonal) {
        for (std::size_t col = 0; col < n; ++col) acc(row, col) *= ph;
        if (!touched.empty()) touched[row] = 1;
    }
    if (!touched.empty()) {
        for (std::size_t row = 0; row < n; ++row)
            if (!touched[row])
                for (std::size_t col = 0; col < n; ++col) acc(row, col) *= form->background;
    }
}

ComplexMatrix evaluate(const Circuit& c) {
    c.system.validate();
    ComplexMatrix acc = ComplexMatrix::identity(c.system.dim());
    for (const auto& g : c.gates) apply_left(g, c.system, acc);
    return acc;
}

ComplexMatrix build_named(std::string_view name, const QuditSystem& sys,
                          std::span<const double> params) {
    sys.validate();
    const int D = sys.dim();
    auto param = [&](std::size_t i, double fallback) {
        return i < params.size() ? params[i] : fallback;
    };
    if (name == "IDENTITY") return ComplexMatrix::identity(D);
    if (name == "CSUM") {
        if (!sys.equal_dims()) invalid("CSUM requires equal qudit dimensions");
        const int d = sys.d1;
        ComplexMatrix m(D);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(d * i + (i + j) % d, d * i + j) = 1.0;
        return m;
    }
    if (name == "CEX") {
        gates::CEX g{static_cast<int>(param(0, 1)),
                     {static_cast<int>(param(1, 0)), static_cast<int>(param(2, 1))}};
        return gate_matrix(g, sys);
    }
    if (name == "MS") return gate_matrix(gates::MS{param(0, kPi)}, sys);
    if (name == "LS") return gate_matrix(gates::LS{param(0, kPi)}, sys);
    invalid("unknown named gate '" + std::string(name) + "'");
}

GateCounts count_gates(const Circuit& c) {
    GateCounts counts;
    for (const auto& g : c.gates) ++counts[kind_of(g)];
    return counts;
}

}  // namespace qdc
