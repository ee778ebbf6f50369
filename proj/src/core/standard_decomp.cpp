#include "qdc/standard_decomp.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <utility>

#include "qdc/error.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;

// Selection-sort routing on one qudit: for each (source -> destination), in
// ascending destination order, swap the source's current level into place.
std::vector<gates::Perm> route(int qudit, int dim, std::vector<std::pair<int, int>> moves) {
    std::sort(moves.begin(), moves.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<int> position(dim);  // position[level] = where the original level sits now
    std::vector<int> occupant(dim);  // occupant[pos] = original level at pos
    for (int i = 0; i < dim; ++i) position[i] = occupant[i] = i;

    std::vector<gates::Perm> out;
    for (const auto& [src, dst] : moves) {
        const int at = position[src];
        if (at == dst) continue;
        out.push_back({qudit, {std::min(at, dst), std::max(at, dst)}});
        const int displaced = occupant[dst];
        std::swap(occupant[at], occupant[dst]);
        position[src] = dst;
        position[displaced] = at;
    }
    return out;
}

void append_perms(Circuit& c, std::span<const gates::Perm> perms) {
    for (const auto& p : perms) c.append(p);
}

}  // namespace

gates::CRot standard_crot(double theta, double phi) { return {1, {0, 1}, theta, phi}; }

gates::PSwap standard_pswap(const QuditSystem& sys, double theta, double phi) {
    return {{1, sys.d2}, theta, phi};
}

gates::CEX standard_cex() { return {1, {0, 1}}; }

Circuit RewritePlan::as_circuit() const {
    Circuit c(system);
    append_perms(c, pre_perms);
    c.append(core);
    append_perms(c, post_perms);
    return c;
}

RewritePlan standardize(const Gate& g, const QuditSystem& sys) {
    validate_gate(g, sys);
    RewritePlan plan;
    plan.system = sys;
    if (const auto* c = std::get_if<gates::CRot>(&g)) {
        auto first = route(1, sys.d1, {{c->control, 1}});
        auto second = route(2, sys.d2, {{c->targets.first, 0}, {c->targets.second, 1}});
        plan.pre_perms = std::move(first);
        plan.pre_perms.insert(plan.pre_perms.end(), second.begin(), second.end());
        plan.core = standard_crot(c->theta, c->phi);
    } else if (const auto* p = std::get_if<gates::PSwap>(&g)) {
        const int d2 = sys.d2;
        const int i1 = p->levels.first / d2, j1 = p->levels.first % d2;
        const int i2 = p->levels.second / d2, j2 = p->levels.second % d2;
        if (j1 == j2)
            throw Error(ErrorCode::InvalidArgument,
                        "PSwap between states with equal second-qudit level has no product routing");
        // |i1,j1> -> |0,1>, |i2,j2> -> |1,0>
        auto first = route(1, sys.d1, {{i1, 0}, {i2, 1}});
        auto second = route(2, sys.d2, {{j1, 1}, {j2, 0}});
        plan.pre_perms = std::move(first);
        plan.pre_perms.insert(plan.pre_perms.end(), second.begin(), second.end());
        plan.core = standard_pswap(sys, p->theta, p->phi);
    } else {
        throw Error(ErrorCode::InvalidArgument,
                    "standardize expects CRot or PSwap, got " + std::string(kind_name(kind_of(g))));
    }
    plan.post_perms.assign(plan.pre_perms.rbegin(), plan.pre_perms.rend());
    return plan;
}

Circuit expand_crot(double theta, double phi, const QuditSystem& sys) {
    // R(theta, phi) = A Z(theta) A^dag with A = R(pi/2, phi + pi/2), and the
    // controlled Z(theta) is CEX Z(-theta/2) CEX Z(theta/2) on the target.
    const double axis = phi + kPi / 2.0;
    const LevelPair t{0, 1};
    Circuit c(sys);
    c.append(gates::LocalR{2, t, -kPi / 2.0, axis});
    c.append(gates::PhaseZ{2, t, theta / 2.0});
    c.append(standard_cex());
    c.append(gates::PhaseZ{2, t, -theta / 2.0});
    c.append(standard_cex());
    c.append(gates::LocalR{2, t, kPi / 2.0, axis});
    return c;
}

Circuit expand_pswap(double theta, double phi, const QuditSystem& sys) {
    // (H (x) H) CEX (H (x) H) exchanges |0,1> and |1,1>, carrying the pair
    // (|0,1>, |1,0>) onto the CRot pair (|1,1>, |1,0>) in swapped order, which
    // flips the sign of phi.
    const LevelPair q{0, 1};
    auto reversed_cex = [&](Circuit& c) {
        c.append(gates::EmbeddedH{1, q});
        c.append(gates::EmbeddedH{2, q});
        c.append(standard_cex());
        c.append(gates::EmbeddedH{1, q});
        c.append(gates::EmbeddedH{2, q});
    };
    Circuit c(sys);
    reversed_cex(c);
    c.extend(expand_crot(theta, -phi, sys));
    reversed_cex(c);
    return c;
}

Circuit lower_to_cex(std::span<const RewritePlan> plans, const QuditSystem& sys) {
    Circuit out(sys);
    for (const auto& plan : plans) {
        if (!(plan.system == sys)) throw Error(ErrorCode::DimensionMismatch, "plan system mismatch");
        append_perms(out, plan.pre_perms);
        if (const auto* c = std::get_if<gates::CRot>(&plan.core)) {
            out.extend(expand_crot(c->theta, c->phi, sys));
        } else if (const auto* p = std::get_if<gates::PSwap>(&plan.core)) {
            out.extend(expand_pswap(p->theta, p->phi, sys));
        } else {
            throw Error(ErrorCode::InvalidArgument, "plan core must be CRot or PSwap");
        }
        append_perms(out, plan.post_perms);
    }
    return out;
}

Circuit lower_classified(std::span<const Gate> classified, const QuditSystem& sys) {
    std::vector<RewritePlan> plans;
    plans.reserve(classified.size());
    for (const auto& g : classified) plans.push_back(standardize(g, sys));
    return lower_to_cex(plans, sys);
}

}  // namespace qdc
