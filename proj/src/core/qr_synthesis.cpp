#include "qdc/qr_synthesis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdc/error.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitaryTol = 1e-10;

void require_unitary(const ComplexMatrix& u) {
    if (!is_unitary(u, kUnitaryTol)) throw Error(ErrorCode::NotUnitary, "input matrix is not unitary");
}

// W <- R(theta, phi)_{i,i+1} W
void rotate_rows(ComplexMatrix& w, std::size_t i, double theta, double phi) {
    const auto r = rotation_2x2(theta, phi);
    for (std::size_t col = 0; col < w.dim(); ++col) {
        const Complex x = w(i, col);
        const Complex y = w(i + 1, col);
        w(i, col) = r[0] * x + r[1] * y;
        w(i + 1, col) = r[2] * x + r[3] * y;
    }
}

}  // namespace

std::vector<gates::VirtualR> SynthesisResult::virtual_sequence() const {
    std::vector<gates::VirtualR> seq = phase_gates;
    seq.insert(seq.end(), rotations.begin(), rotations.end());
    return seq;
}

ComplexMatrix embed_two_qudit(const ComplexMatrix& u, const QuditSystem& sys) {
    sys.validate();
    if (!sys.equal_dims())
        throw Error(ErrorCode::InvalidArgument, "synthesis requires equal qudit dimensions");
    if (static_cast<int>(u.dim()) != sys.dim())
        throw Error(ErrorCode::DimensionMismatch,
                    "unitary dimension " + std::to_string(u.dim()) + " does not match d1*d2 = " +
                        std::to_string(sys.dim()));
    require_unitary(u);
    return u;
}

SynthesisResult givens_qr(const ComplexMatrix& u) {
    require_unitary(u);
    const std::size_t n = u.dim();
    ComplexMatrix w = u;
    // Eliminating rotations G in the order they are applied to w.
    std::vector<gates::VirtualR> eliminators;
    for (std::size_t col = 0; col + 1 < n; ++col) {
        for (std::size_t i = n - 1; i-- > col;) {
            const Complex a = w(i, col);
            const Complex b = w(i + 1, col);
            if (std::abs(b) == 0.0) continue;
            const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
            if (std::abs(theta) < kPruneThreshold) continue;
            const double phi = std::arg(b) - std::arg(a) - kPi / 2.0;
            rotate_rows(w, i, theta, phi);
            w(i + 1, col) = 0.0;
            eliminators.push_back({static_cast<int>(i), theta, phi});
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            if (std::abs(w(row, col)) > kUnitaryTol)
                throw Error(ErrorCode::Internal,
                            "Givens elimination left column " + std::to_string(col) +
                                " non-diagonal (entry " + std::to_string(row) + ")");
        }
    }

    SynthesisResult r;
    r.phases.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.phases[i] = w(i, i) / std::abs(w(i, i));
    // u = G_1^dag ... G_k^dag Theta, so Theta acts first, then G_k^dag, ..., G_1^dag.
    r.rotations.reserve(eliminators.size());
    for (auto it = eliminators.rbegin(); it != eliminators.rend(); ++it)
        r.rotations.push_back({it->level, -it->theta, it->phi});
    return r;
}

std::vector<gates::VirtualR> phase_to_rotations(std::span<const Complex> phases,
                                                double* global_phase) {
    std::vector<gates::VirtualR> out;
    if (phases.empty()) {
        if (global_phase) *global_phase = 0.0;
        return out;
    }
    const std::size_t n = phases.size();
    std::vector<double> rel(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        rel[k] = std::arg(phases[k] / phases[0]);
        mean += rel[k];
    }
    mean /= static_cast<double>(n);
    if (global_phase) *global_phase = std::arg(phases[0]) + mean;

    // Z_k(beta_k) on (k, k+1) contributes -beta_k/2 to level k and +beta_k/2
    // to level k+1; beta_k = -2 sum_{m<=k} (rel_m - mean).
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        cumulative += rel[k] - mean;
        const double beta = -2.0 * cumulative;
        if (std::abs(beta) < kPruneThreshold) continue;
        const int level = static_cast<int>(k);
        out.push_back({level, -kPi / 2.0, 0.0});
        out.push_back({level, beta, kPi / 2.0});
        out.push_back({level, kPi / 2.0, 0.0});
    }
    return out;
}

std::vector<Gate> classify(std::span<const gates::VirtualR> rotations, const QuditSystem& sys) {
    if (!sys.equal_dims())
        throw Error(ErrorCode::InvalidArgument, "classify requires equal qudit dimensions");
    const int d = sys.d1;
    std::vector<Gate> out;
    out.reserve(rotations.size());
    for (const auto& r : rotations) {
        if (r.level < 0 || r.level > sys.dim() - 2)
            throw Error(ErrorCode::InvalidArgument,
                        "rotation level " + std::to_string(r.level) + " is not an adjacent pair in D = " +
                            std::to_string(sys.dim()));
        const int block = r.level / d;
        if ((r.level + 1) / d == block) {
            const int t = r.level % d;
            out.emplace_back(gates::CRot{block, {t, t + 1}, r.theta, r.phi});
        } else {
            out.emplace_back(gates::PSwap{{r.level, r.level + 1}, r.theta, r.phi});
        }
    }
    return out;
}

SynthesisResult synthesize(const ComplexMatrix& u, const QuditSystem& sys) {
    const ComplexMatrix v = embed_two_qudit(u, sys);
    SynthesisResult r = givens_qr(v);
    r.system = sys;
    r.phase_gates = phase_to_rotations(r.phases, &r.global_phase);
    const auto seq = r.virtual_sequence();
    r.classified = classify(seq, sys);

    Circuit check(sys);
    for (const auto& g : seq) check.append(g);
    r.residual_check = fidelity(evaluate(check), u);
    if (r.residual_check.infidelity() > 1e-10)
        throw Error(ErrorCode::Internal, "QR reconstruction infidelity " +
                                             std::to_string(r.residual_check.infidelity()) +
                                             " exceeds 1e-10");
    return r;
}

Circuit classified_circuit(const SynthesisResult& r) {
    Circuit c(r.system);
    for (const auto& g : r.classified) c.append(g);
    return c;
}

}  // namespace qdc
