#pragma once

#include <span>
#include <vector>

#include "qdc/circuit.hpp"

namespace qdc {

struct ParamBound {
    double lower = 0.0;
    double upper = 0.0;
};

/// d^2 - 1 parameters per SU(d) block.
constexpr int su_param_count(int d) { return d * d - 1; }

/// Block layout: for each pair m < n in lexicographic order, first the phase
/// lambda_{n,m} in [0, pi], then the rotation lambda_{m,n} in [0, pi/2];
/// after all pairs, the d-1 diagonal phases lambda_{l,l} in [0, 2pi].
std::vector<ParamBound> su_bounds(int d);

/// Ordered product
///   prod_{m<n} exp(i Z_{m,n} lambda_{n,m}) exp(i Y_{m,n} lambda_{m,n})
///   * prod_{l<d-1} exp(i Z_{l,d-1} lambda_{l,l})
/// with Z_{m,n} = |m><m| - |n><n| and Y_{m,n} = -i|m><n| + i|n><m|.
ComplexMatrix local_su_d(std::span<const double> block, int d);

/// Same unitary as local_su_d, as PhaseZ / LocalR gates on one qudit in
/// application order. Factors with a vanishing angle are dropped.
std::vector<Gate> su_d_gates(std::span<const double> block, int d, int qudit);

}  // namespace qdc
