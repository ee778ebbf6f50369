#include "qdc/ansatz.hpp"

#include <cmath>
#include <numbers>

#include "qdc/error.hpp"
#include "qdc/standard_decomp.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

ParamBound native_angle_bound(NativeKind kind) {
    // MS has period 8pi but 4pi up to a global phase; LS has period 2pi.
    return kind == NativeKind::MS ? ParamBound{0.0, 4.0 * kPi} : ParamBound{0.0, 2.0 * kPi};
}

ComplexMatrix local_pair(std::span<const double> params, std::size_t offset, const QuditSystem& sys) {
    const auto n1 = static_cast<std::size_t>(su_param_count(sys.d1));
    const auto n2 = static_cast<std::size_t>(su_param_count(sys.d2));
    return kron(local_su_d(params.subspan(offset, n1), sys.d1),
                local_su_d(params.subspan(offset + n1, n2), sys.d2));
}

}  // namespace

NativeGate NativeGate::ms(double theta, bool free) {
    NativeGate g;
    g.kind = NativeKind::MS;
    g.theta = theta;
    g.free_angle = free;
    return g;
}

NativeGate NativeGate::ls(double theta, bool free) {
    NativeGate g;
    g.kind = NativeKind::LS;
    g.theta = theta;
    g.free_angle = free;
    return g;
}

NativeGate NativeGate::custom_matrix(std::string label, ComplexMatrix m) {
    NativeGate g;
    g.kind = NativeKind::Custom;
    g.label = std::move(label);
    g.custom = std::make_shared<const ComplexMatrix>(std::move(m));
    return g;
}

std::string NativeGate::name() const {
    switch (kind) {
        case NativeKind::CEX: return "cex";
        case NativeKind::MS: return "ms";
        case NativeKind::LS: return "ls";
        case NativeKind::Custom: return label.empty() ? "custom" : label;
    }
    return "?";
}

Gate NativeGate::gate(double angle) const {
    switch (kind) {
        case NativeKind::CEX: return standard_cex();
        case NativeKind::MS: return gates::MS{angle};
        case NativeKind::LS: return gates::LS{angle};
        case NativeKind::Custom: return gates::Custom{label, custom};
    }
    invalid("unknown native kind");
}

std::size_t ansatz_param_count(const QuditSystem& sys, int layers, const NativeGate& native) {
    const auto pair = static_cast<std::size_t>(su_param_count(sys.d1) + su_param_count(sys.d2));
    std::size_t n = pair * static_cast<std::size_t>(layers + 1);
    if (native.has_angle() && native.free_angle) n += static_cast<std::size_t>(layers);
    return n;
}

AnsatzSpec AnsatzSpec::make(const QuditSystem& sys, int layers, NativeGate native) {
    sys.validate();
    if (layers < 0) invalid("layer count must be >= 0");
    AnsatzSpec spec;
    spec.system = sys;
    spec.layers = layers;
    spec.native = std::move(native);
    const auto b1 = su_bounds(sys.d1);
    const auto b2 = su_bounds(sys.d2);
    for (int k = 0; k <= layers; ++k) {
        spec.bounds.insert(spec.bounds.end(), b1.begin(), b1.end());
        spec.bounds.insert(spec.bounds.end(), b2.begin(), b2.end());
    }
    if (spec.native.has_angle() && spec.native.free_angle)
        for (int k = 0; k < layers; ++k) spec.bounds.push_back(native_angle_bound(spec.native.kind));
    spec.params.assign(spec.bounds.size(), 0.0);
    spec.validate();
    return spec;
}

std::size_t AnsatzSpec::dressing_param_count() const noexcept {
    return static_cast<std::size_t>(su_param_count(system.d1) + su_param_count(system.d2)) *
           static_cast<std::size_t>(layers + 1);
}

void AnsatzSpec::validate() const {
    system.validate();
    if (layers < 0) invalid("layer count must be >= 0");
    if (bounds.size() != ansatz_param_count(system, layers, native))
        invalid("ansatz bounds do not match the layer count");
    if (params.size() != bounds.size())
        invalid("ansatz expects " + std::to_string(bounds.size()) + " parameters, got " +
                std::to_string(params.size()));
    // Entangler must fit the system (LS / MS need equal dims, custom needs size D).
    validate_gate(native.gate(), system);
}

ComplexMatrix build_ansatz(const AnsatzSpec& spec) { return build_ansatz(spec, spec.params); }

ComplexMatrix build_ansatz(const AnsatzSpec& spec, std::span<const double> params) {
    if (params.size() != spec.bounds.size())
        invalid("ansatz expects " + std::to_string(spec.bounds.size()) + " parameters, got " +
                std::to_string(params.size()));
    const QuditSystem& sys = spec.system;
    const auto pair = static_cast<std::size_t>(su_param_count(sys.d1) + su_param_count(sys.d2));
    const bool free = spec.native.has_angle() && spec.native.free_angle;
    const std::size_t angle_offset = spec.dressing_param_count();

    ComplexMatrix acc = local_pair(params, 0, sys);
    for (int layer = 0; layer < spec.layers; ++layer) {
        const double angle = free ? params[angle_offset + layer] : spec.native.theta;
        apply_left(spec.native.gate(angle), sys, acc);
        acc = multiply(local_pair(params, pair * (layer + 1), sys), acc);
    }
    return acc;
}

double objective(const AnsatzSpec& spec, std::span<const double> params, const ComplexMatrix& target) {
    if (target.dim() != static_cast<std::size_t>(spec.system.dim()))
        throw Error(ErrorCode::DimensionMismatch, "objective: target dimension mismatch");
    return 1.0 - fidelity(build_ansatz(spec, params), target).value;
}

Circuit ansatz_circuit(const AnsatzSpec& spec) {
    spec.validate();
    const QuditSystem& sys = spec.system;
    const auto n1 = static_cast<std::size_t>(su_param_count(sys.d1));
    const auto n2 = static_cast<std::size_t>(su_param_count(sys.d2));
    const bool free = spec.native.has_angle() && spec.native.free_angle;
    const std::size_t angle_offset = spec.dressing_param_count();
    const std::span<const double> p = spec.params;

    Circuit c(sys);
    auto add_pair = [&](int k) {
        const std::size_t off = (n1 + n2) * static_cast<std::size_t>(k);
        for (auto& g : su_d_gates(p.subspan(off, n1), sys.d1, 1)) c.append(std::move(g));
        for (auto& g : su_d_gates(p.subspan(off + n1, n2), sys.d2, 2)) c.append(std::move(g));
    };
    add_pair(0);
    for (int layer = 0; layer < spec.layers; ++layer) {
        c.append(spec.native.gate(free ? p[angle_offset + layer] : spec.native.theta));
        add_pair(layer + 1);
    }
    return c;
}

std::vector<double> warm_start_params(const AnsatzSpec& spec) {
    if (!(spec.native.has_angle() && spec.native.free_angle))
        invalid("warm start needs a free native angle");
    const std::size_t dressing = spec.dressing_param_count();
    const auto pair = static_cast<std::size_t>(su_param_count(spec.system.d1) + su_param_count(spec.system.d2));
    std::vector<double> out(spec.params.begin(), spec.params.begin() + static_cast<std::ptrdiff_t>(dressing));
    out.insert(out.end(), pair, 0.0);
    out.insert(out.end(), spec.params.begin() + static_cast<std::ptrdiff_t>(dressing), spec.params.end());
    out.push_back(0.0);
    return out;
}

}  // namespace qdc
