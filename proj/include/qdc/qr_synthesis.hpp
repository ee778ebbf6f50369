#pragma once

#include <vector>

#include "qdc/circuit.hpp"

namespace qdc {

/// Output of the ladder QR decomposition of a D-level (virtual) unitary.
///
/// All gate lists are in application order. The full virtual sequence is
/// phase_gates followed by rotations; its product reproduces the input up to
/// the recorded global phase.
struct SynthesisResult {
    QuditSystem system;
    std::vector<gates::VirtualR> rotations;
    std::vector<Complex> phases;  // diagonal of the residual phase matrix
    std::vector<gates::VirtualR> phase_gates;
    double global_phase = 0.0;
    std::vector<Gate> classified;  // CRot / PSwap, same order as virtual_sequence()
    Fidelity residual_check;

    std::vector<gates::VirtualR> virtual_sequence() const;
};

/// Rotations and relative phases below this magnitude are not emitted.
inline constexpr double kPruneThreshold = 1e-12;

/// Validates that u is a unitary on sys with d1 == d2 and returns it
/// unchanged: |i,j> is already virtual level d*i + j in the kron convention.
ComplexMatrix embed_two_qudit(const ComplexMatrix& u, const QuditSystem& sys);

/// Ladder Givens elimination. Columns are cleared left to right, each from
/// the bottom row upward with rotations on (i, i+1). Fills rotations and
/// phases; phase_gates, classified and residual_check are left empty.
SynthesisResult givens_qr(const ComplexMatrix& u);

/// Expresses diag(phases) up to a global phase as adjacent-level Z gates,
/// each expanded to three VirtualR through Z(t) = R(pi/2,0) R(t,pi/2) R(-pi/2,0).
/// The discarded global phase is written to *global_phase when non-null.
std::vector<gates::VirtualR> phase_to_rotations(std::span<const Complex> phases,
                                                double* global_phase = nullptr);

/// Maps each virtual rotation onto the two-qudit picture: a rotation inside
/// one control block is a CRot, one straddling a block boundary a PSwap.
std::vector<Gate> classify(std::span<const gates::VirtualR> rotations, const QuditSystem& sys);

/// embed -> givens_qr -> phase_to_rotations -> classify, with a
/// reconstruction check against u.
SynthesisResult synthesize(const ComplexMatrix& u, const QuditSystem& sys);

/// Circuit over CRot / PSwap gates for a synthesis result.
Circuit classified_circuit(const SynthesisResult& r);

}  // namespace qdc
