#pragma once

#include <span>
#include <vector>

#include "qdc/circuit.hpp"

namespace qdc {

/// A CRot or PSwap rewritten as perms^dagger * core * perms.
///
/// The standardized cores are CRot(control 1; targets 0,1) and
/// PSwap(|0,1> <-> |1,0>), i.e. coupled-basis levels (1, d).
struct RewritePlan {
    QuditSystem system;
    std::vector<gates::Perm> pre_perms;   // application order
    Gate core;
    std::vector<gates::Perm> post_perms;  // pre_perms reversed

    Circuit as_circuit() const;
};

gates::CRot standard_crot(double theta, double phi);
gates::PSwap standard_pswap(const QuditSystem& sys, double theta, double phi);
gates::CEX standard_cex();

RewritePlan standardize(const Gate& g, const QuditSystem& sys);

/// CRot(1;0,1)(theta, phi) over LocalR, PhaseZ and exactly two CEX(1;0,1).
Circuit expand_crot(double theta, double phi, const QuditSystem& sys);

/// Standardized PSwap(theta, phi) over EmbeddedH, LocalR, PhaseZ and exactly
/// four CEX(1;0,1): a CRot expansion conjugated by (H (x) H) CEX (H (x) H).
Circuit expand_pswap(double theta, double phi, const QuditSystem& sys);

/// Concatenates pre perms, expanded core and post perms of every plan.
Circuit lower_to_cex(std::span<const RewritePlan> plans, const QuditSystem& sys);

/// standardize + lower_to_cex over a classified CRot / PSwap sequence.
Circuit lower_classified(std::span<const Gate> classified, const QuditSystem& sys);

}  // namespace qdc
