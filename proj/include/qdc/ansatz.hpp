#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qdc/circuit.hpp"
#include "qdc/su_d.hpp"

namespace qdc {

enum class NativeKind { CEX, MS, LS, Custom };

/// Entangling gate placed in every ansatz layer.
struct NativeGate {
    NativeKind kind = NativeKind::CEX;
    double theta = 3.14159265358979323846;  // MS / LS angle when not free
    bool free_angle = false;                // MS / LS only: angle joins the parameter vector
    std::shared_ptr<const ComplexMatrix> custom;
    std::string label;

    static NativeGate cex() { return {}; }
    static NativeGate ms(double theta = 3.14159265358979323846, bool free = false);
    static NativeGate ls(double theta = 3.14159265358979323846, bool free = false);
    static NativeGate custom_matrix(std::string label, ComplexMatrix m);

    bool has_angle() const noexcept { return kind == NativeKind::MS || kind == NativeKind::LS; }
    std::string name() const;
    Gate gate(double angle) const;
    Gate gate() const { return gate(theta); }
};

/// Layered ansatz: L0 E L1 E ... E L_layers, each L a pair of SU(d) blocks.
///
/// params holds (layers + 1) pairs, first qudit's block before the second's,
/// followed by one native angle per layer when the native angle is free.
struct AnsatzSpec {
    QuditSystem system;
    int layers = 1;
    NativeGate native;
    std::vector<double> params;
    std::vector<ParamBound> bounds;

    /// Ansatz with all parameters zero (identity dressings).
    static AnsatzSpec make(const QuditSystem& sys, int layers, NativeGate native);

    std::size_t param_count() const noexcept { return bounds.size(); }
    std::size_t dressing_param_count() const noexcept;
    void validate() const;
};

/// (2 * layers + 2) * (d^2 - 1), plus layers when the native angle is free.
std::size_t ansatz_param_count(const QuditSystem& sys, int layers, const NativeGate& native);

ComplexMatrix build_ansatz(const AnsatzSpec& spec);
ComplexMatrix build_ansatz(const AnsatzSpec& spec, std::span<const double> params);

/// 1 - fidelity(build_ansatz(spec, params), target).
double objective(const AnsatzSpec& spec, std::span<const double> params, const ComplexMatrix& target);

/// The ansatz as a gate-level circuit (PhaseZ / LocalR dressings, native gate).
Circuit ansatz_circuit(const AnsatzSpec& spec);

/// Parameters for layers + 1 that reproduce the layers-deep unitary: the new
/// trailing layer gets identity dressings and a zero native angle. Requires a
/// free native angle.
std::vector<double> warm_start_params(const AnsatzSpec& spec);

}  // namespace qdc
