#include "qdc/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdc/error.hpp"

namespace qdc {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty()) parse_error("matrix must be a non-empty array of rows");
    const std::size_t n = rows.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n) parse_error("matrix must be square");
        for (const auto& z : row) {
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                parse_error("matrix entries must be [re, im] number pairs");
            entries.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
    }
    return ComplexMatrix(n, std::move(entries));
}

QuditSystem dims_from_json(const json& j) {
    if (!j.contains("dims")) parse_error("missing \"dims\"");
    const auto& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
        !dims[1].is_number_integer())
        parse_error("\"dims\" must be a pair of integers");
    QuditSystem sys{dims[0].get<int>(), dims[1].get<int>()};
    if (sys.d1 < 2 || sys.d2 < 2) parse_error("qudit dimensions must be >= 2");
    return sys;
}

json pair_json(const LevelPair& p) { return json::array({p.first, p.second}); }

LevelPair pair_from(const json& g, const char* key) {
    const auto& a = g.at(key);
    if (!a.is_array() || a.size() != 2) parse_error(std::string("\"") + key + "\" must be a pair");
    return {a[0].get<int>(), a[1].get<int>()};
}

json gate_to_json(const Gate& gate) {
    json j;
    j["kind"] = std::string(kind_name(kind_of(gate)));
    std::visit(Overloaded{
                   [&](const gates::LocalR& r) {
                       j["qudit"] = r.qudit;
                       j["levels"] = pair_json(r.levels);
                       j["theta"] = r.theta;
                       j["phi"] = r.phi;
                   },
                   [&](const gates::PhaseZ& z) {
                       j["qudit"] = z.qudit;
                       j["levels"] = pair_json(z.levels);
                       j["theta"] = z.theta;
                   },
                   [&](const gates::Perm& p) {
                       j["qudit"] = p.qudit;
                       j["levels"] = pair_json(p.levels);
                   },
                   [&](const gates::EmbeddedH& h) {
                       j["qudit"] = h.qudit;
                       j["levels"] = pair_json(h.levels);
                   },
                   [&](const gates::CRot& c) {
                       j["control"] = c.control;
                       j["targets"] = pair_json(c.targets);
                       j["theta"] = c.theta;
                       j["phi"] = c.phi;
                   },
                   [&](const gates::PSwap& p) {
                       j["levels"] = pair_json(p.levels);
                       j["theta"] = p.theta;
                       j["phi"] = p.phi;
                   },
                   [&](const gates::CEX& c) {
                       j["control"] = c.control;
                       j["targets"] = pair_json(c.targets);
                   },
                   [&](const gates::MS& ms) { j["theta"] = ms.theta; },
                   [&](const gates::LS& ls) { j["theta"] = ls.theta; },
                   [&](const gates::VirtualR& v) {
                       j["level"] = v.level;
                       j["theta"] = v.theta;
                       j["phi"] = v.phi;
                   },
                   [&](const gates::Custom& c) {
                       j["label"] = c.label;
                       j["matrix"] = matrix_to_json(*c.matrix);
                   },
               },
               gate);
    return j;
}

Gate gate_from_json(const json& g) {
    if (!g.is_object() || !g.contains("kind") || !g["kind"].is_string())
        parse_error("gate must be an object with a string \"kind\"");
    const auto kind = kind_from_name(g["kind"].get<std::string>());
    if (!kind) parse_error("unknown gate kind '" + g["kind"].get<std::string>() + "'");
    auto num = [&](const char* key) { return g.at(key).get<double>(); };
    auto integer = [&](const char* key) { return g.at(key).get<int>(); };
    switch (*kind) {
        case GateKind::LocalR:
            return gates::LocalR{integer("qudit"), pair_from(g, "levels"), num("theta"), num("phi")};
        case GateKind::PhaseZ:
            return gates::PhaseZ{integer("qudit"), pair_from(g, "levels"), num("theta")};
        case GateKind::Perm: return gates::Perm{integer("qudit"), pair_from(g, "levels")};
        case GateKind::EmbeddedH: return gates::EmbeddedH{integer("qudit"), pair_from(g, "levels")};
        case GateKind::CRot:
            return gates::CRot{integer("control"), pair_from(g, "targets"), num("theta"), num("phi")};
        case GateKind::PSwap: return gates::PSwap{pair_from(g, "levels"), num("theta"), num("phi")};
        case GateKind::CEX: return gates::CEX{integer("control"), pair_from(g, "targets")};
        case GateKind::MS: return gates::MS{num("theta")};
        case GateKind::LS: return gates::LS{num("theta")};
        case GateKind::VirtualR: return gates::VirtualR{integer("level"), num("theta"), num("phi")};
        case GateKind::Custom:
            return gates::Custom{g.value("label", std::string{}),
                                 std::make_shared<const ComplexMatrix>(matrix_from_json(g.at("matrix")))};
    }
    parse_error("unhandled gate kind");
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

std::string unitary_to_json(const UnitaryFile& u) {
    json j;
    j["dims"] = {u.system.d1, u.system.d2};
    j["matrix"] = matrix_to_json(u.matrix);
    return j.dump() + "\n";
}

UnitaryFile unitary_from_json(const std::string& text) {
    const json j = parse_document(text);
    try {
        if (!j.is_object()) parse_error("unitary file must be a JSON object");
        UnitaryFile u{dims_from_json(j), matrix_from_json(j.at("matrix"))};
        if (static_cast<int>(u.matrix.dim()) != u.system.dim())
            parse_error("matrix has " + std::to_string(u.matrix.dim()) + " rows but dims give D = " +
                        std::to_string(u.system.dim()));
        return u;
    } catch (const json::exception& e) {
        parse_error(std::string("malformed unitary file: ") + e.what());
    }
}

std::string circuit_to_json(const Circuit& c) {
    json j;
    j["dims"] = {c.system.d1, c.system.d2};
    json gs = json::array();
    for (const auto& g : c.gates) gs.push_back(gate_to_json(g));
    j["gates"] = std::move(gs);
    if (c.provenance) j["provenance"] = {{"source", c.provenance->source}, {"stage", c.provenance->stage}};
    return j.dump(1) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
    const json j = parse_document(text);
    try {
        if (!j.is_object()) parse_error("circuit file must be a JSON object");
        Circuit c(dims_from_json(j));
        if (!j.contains("gates") || !j["gates"].is_array()) parse_error("missing \"gates\" array");
        for (const auto& g : j["gates"]) {
            Gate gate = gate_from_json(g);
            try {
                validate_gate(gate, c.system);
            } catch (const Error& e) {
                parse_error(std::string("invalid gate: ") + e.what());
            }
            c.append(std::move(gate));
        }
        if (j.contains("provenance")) {
            const auto& p = j["provenance"];
            c.provenance = Provenance{p.value("source", std::string{}), p.value("stage", std::string{})};
        }
        return c;
    } catch (const json::exception& e) {
        parse_error(std::string("malformed circuit file: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace qdc
