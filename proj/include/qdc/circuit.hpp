#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdc/linalg.hpp"

namespace qdc {

/// Two qudits of dimensions d1 and d2; basis state |i,j> sits at row d2*i + j.
struct QuditSystem {
    int d1 = 2;
    int d2 = 2;

    int dim() const noexcept { return d1 * d2; }
    int qudit_dim(int qudit) const;
    bool equal_dims() const noexcept { return d1 == d2; }
    void validate() const;

    bool operator==(const QuditSystem&) const = default;
};

struct LevelPair {
    int first = 0;
    int second = 1;
    bool operator==(const LevelPair&) const = default;
};

namespace gates {

/// R(theta, phi) on levels (m, n) of one qudit (qudit is 1 or 2).
struct LocalR {
    int qudit = 1;
    LevelPair levels;
    double theta = 0.0;
    double phi = 0.0;
};

/// Z(theta) = diag(e^{-i theta/2}, e^{i theta/2}) on levels (m, n).
struct PhaseZ {
    int qudit = 1;
    LevelPair levels;
    double theta = 0.0;
};

/// Exchange of two levels of one qudit (real, involutive).
struct Perm {
    int qudit = 1;
    LevelPair levels;
};

/// Two-level Hadamard (1/sqrt2)[[1,1],[1,-1]] on levels (m, n).
struct EmbeddedH {
    int qudit = 1;
    LevelPair levels;
};

/// R(theta, phi) on |c,t1>, |c,t2> of the coupled system.
struct CRot {
    int control = 0;
    LevelPair targets;
    double theta = 0.0;
    double phi = 0.0;
};

/// R(theta, phi) between two coupled-basis states a = d2*i+j, b = d2*k+l
/// lying in different control blocks.
struct PSwap {
    LevelPair levels;
    double theta = 0.0;
    double phi = 0.0;
};

/// |c,t1> <-> |c,t2>, identity elsewhere.
struct CEX {
    int control = 1;
    LevelPair targets;
};

/// exp(-i theta/4 (I (x) I + sx01 (x) sx01)).
struct MS {
    double theta = 0.0;
};

/// exp(-i theta sum_i |ii><ii|).
struct LS {
    double theta = 0.0;
};

/// R(theta, phi) on adjacent levels (level, level+1) of the D-level virtual qudit.
struct VirtualR {
    int level = 0;
    double theta = 0.0;
    double phi = 0.0;
};

/// User-supplied D x D entangler.
struct Custom {
    std::string label;
    std::shared_ptr<const ComplexMatrix> matrix;
};

}  // namespace gates

using Gate = std::variant<gates::LocalR, gates::PhaseZ, gates::Perm, gates::EmbeddedH,
                          gates::CRot, gates::PSwap, gates::CEX, gates::MS, gates::LS,
                          gates::VirtualR, gates::Custom>;

enum class GateKind {
    LocalR,
    PhaseZ,
    Perm,
    EmbeddedH,
    CRot,
    PSwap,
    CEX,
    MS,
    LS,
    VirtualR,
    Custom,
};

GateKind kind_of(const Gate& g) noexcept;
std::string_view kind_name(GateKind kind) noexcept;
std::optional<GateKind> kind_from_name(std::string_view name) noexcept;

/// Reduces angles outside (-2pi, 2pi] by the gate's exact period; values
/// already in range are returned bit-for-bit.
Gate normalized(Gate g);

/// Throws Error(InvalidArgument) when the gate does not fit the system.
void validate_gate(const Gate& g, const QuditSystem& sys);

struct Provenance {
    std::string source;
    std::string stage;
};

/// Ordered gate list; gates[0] acts first, so the circuit's matrix is
/// gate_matrix(gates[n-1]) * ... * gate_matrix(gates[0]).
struct Circuit {
    QuditSystem system;
    std::vector<Gate> gates;
    std::optional<Provenance> provenance;

    Circuit() = default;
    explicit Circuit(QuditSystem sys) : system(sys) {}

    void append(Gate g) { gates.push_back(normalized(std::move(g))); }
    void extend(const Circuit& other);
    std::size_t size() const noexcept { return gates.size(); }
    bool empty() const noexcept { return gates.empty(); }
};

/// 2x2 R(theta, phi) as it appears in every rotation gate.
std::array<Complex, 4> rotation_2x2(double theta, double phi);

ComplexMatrix gate_matrix(const Gate& g, const QuditSystem& sys);

/// acc <- gate_matrix(g) * acc, touching only the rows the gate acts on.
void apply_left(const Gate& g, const QuditSystem& sys, ComplexMatrix& acc);

ComplexMatrix evaluate(const Circuit& c);

/// Reference matrices: "CSUM", "CEX" (params: control, t1, t2), "MS" and
/// "LS" (params: theta), "IDENTITY".
ComplexMatrix build_named(std::string_view name, const QuditSystem& sys,
                          std::span<const double> params = {});

using GateCounts = std::map<GateKind, std::size_t>;
GateCounts count_gates(const Circuit& c);

}  // namespace qdc
