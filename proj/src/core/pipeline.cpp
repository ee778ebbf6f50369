#include "qdc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "qdc/error.hpp"
#include "qdc/qr_synthesis.hpp"
#include "qdc/serialize.hpp"
#include "qdc/standard_decomp.hpp"

namespace qdc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double infidelity_of(const Circuit& c, const ComplexMatrix& u) { return 1.0 - fidelity(evaluate(c), u).value; }

GateKind native_gate_kind(const NativeGate& native) { return kind_of(native.gate()); }

double angle_of(const Gate& g) {
    if (const auto* m = std::get_if<gates::MS>(&g)) return m->theta;
    if (const auto* l = std::get_if<gates::LS>(&g)) return l->theta;
    return 0.0;
}

void fill_counts(CompilationReport& r, const Circuit& c) {
    r.cex_tot = count_kind(c, GateKind::CEX);
    r.ms_tot = count_kind(c, GateKind::MS);
    r.ls_tot = count_kind(c, GateKind::LS);
}

CompilationResult trivial_cex_solution(const QuditSystem& sys) {
    CompilationResult out;
    out.circuit = Circuit(sys);
    out.circuit.append(standard_cex());
    out.circuit.provenance = Provenance{"", "compile-cex"};
    out.layers_used = 1;
    out.achieved_infidelity = 0.0;
    out.optimizer_infidelity = 0.0;
    out.converged = true;
    return out;
}

// A cached file is usable only if it is a valid circuit for this system whose
// entanglers are all the requested native (at the fixed angle when fixed).
std::optional<CompilationResult> load_cached(const fs::path& file, const QuditSystem& sys,
                                             const NativeGate& native, double target) {
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) return std::nullopt;
    Circuit c;
    try {
        c = circuit_from_json(read_text_file(file));
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!(c.system == sys)) return std::nullopt;
    const GateKind want = native_gate_kind(native);
    const Gate fixed = normalized(native.gate());
    int natives = 0;
    for (const auto& g : c.gates) {
        const GateKind k = kind_of(g);
        if (k == GateKind::CEX || k == GateKind::MS || k == GateKind::LS || k == GateKind::CRot ||
            k == GateKind::PSwap || k == GateKind::Custom) {
            if (k != want) return std::nullopt;
            ++natives;
            if (native.has_angle() && !native.free_angle && std::abs(angle_of(g) - angle_of(fixed)) > 1e-12)
                return std::nullopt;
        }
    }
    CompilationResult out;
    out.circuit = std::move(c);
    out.layers_used = natives;
    out.achieved_infidelity = infidelity_of(out.circuit, gate_matrix(standard_cex(), sys));
    out.optimizer_infidelity = out.achieved_infidelity;
    out.converged = out.achieved_infidelity <= target;
    if (!out.converged) return std::nullopt;
    return out;
}

json report_json(const CompilationReport& r) {
    json j;
    j["system"] = r.system;
    j["dims"] = {r.d1, r.d2};
    j["dim"] = r.dim;
    j["native"] = r.native;
    j["stage"] = r.stage;
    j["counts"] = {{"cRot", r.crot},       {"pSwap", r.pswap}, {"CEX_tot", r.cex_tot},
                   {"MS_tot", r.ms_tot}, {"LS_tot", r.ls_tot}};
    json inf = {{"synthesize", r.synthesis_infidelity},
                {"lower", r.lowered_infidelity},
                {"final", r.final_infidelity}};
    inf["cex_solution"] = r.cex_solution_infidelity ? json(*r.cex_solution_infidelity) : json(nullptr);
    j["infidelity"] = inf;
    j["wall_time_s"] = {{"synthesize", r.synthesis_time_s},
                        {"lower", r.lowering_time_s},
                        {"compile", r.compile_time_s},
                        {"total", r.total_time_s}};
    j["converged"] = r.converged;
    j["cache_hit"] = r.cache_hit;
    j["cex_layers"] = r.cex_layers;
    j["seed"] = r.seed;
    j["optimizer_trace"] = r.optimizer_trace;
    return j;
}

std::string format_infidelity(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string_view stage_name(Stage s) noexcept {
    switch (s) {
        case Stage::Synthesize: return "synthesize";
        case Stage::Lower: return "lower";
        case Stage::CompileCex: return "compile-cex";
        case Stage::Full: return "full";
    }
    return "full";
}

std::optional<Stage> stage_from_name(std::string_view name) noexcept {
    for (Stage s : {Stage::Synthesize, Stage::Lower, Stage::CompileCex, Stage::Full})
        if (stage_name(s) == name) return s;
    return std::nullopt;
}

std::string system_label(const QuditSystem& sys) {
    if (sys.d1 != sys.d2) return "qudits " + std::to_string(sys.d1) + "x" + std::to_string(sys.d2);
    switch (sys.d1) {
        case 2: return "two qubits";
        case 3: return "two qutrits";
        case 4: return "two ququarts";
        default: return "two " + std::to_string(sys.d1) + "-level qudits";
    }
}

std::string report_to_json(const CompilationReport& r) { return report_json(r).dump(1); }

CompilationReport report_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        CompilationReport r;
        r.system = j.at("system").get<std::string>();
        r.d1 = j.at("dims").at(0).get<int>();
        r.d2 = j.at("dims").at(1).get<int>();
        r.dim = j.at("dim").get<int>();
        r.native = j.at("native").get<std::string>();
        r.stage = j.value("stage", std::string("full"));
        const auto& c = j.at("counts");
        r.crot = c.at("cRot").get<std::size_t>();
        r.pswap = c.at("pSwap").get<std::size_t>();
        r.cex_tot = c.at("CEX_tot").get<std::size_t>();
        r.ms_tot = c.at("MS_tot").get<std::size_t>();
        r.ls_tot = c.at("LS_tot").get<std::size_t>();
        const auto& inf = j.at("infidelity");
        r.synthesis_infidelity = inf.at("synthesize").get<double>();
        r.lowered_infidelity = inf.at("lower").get<double>();
        r.final_infidelity = inf.at("final").get<double>();
        if (inf.contains("cex_solution") && !inf.at("cex_solution").is_null())
            r.cex_solution_infidelity = inf.at("cex_solution").get<double>();
        if (j.contains("wall_time_s")) {
            const auto& w = j.at("wall_time_s");
            r.synthesis_time_s = w.value("synthesize", 0.0);
            r.lowering_time_s = w.value("lower", 0.0);
            r.compile_time_s = w.value("compile", 0.0);
            r.total_time_s = w.value("total", 0.0);
        }
        r.converged = j.value("converged", true);
        r.cache_hit = j.value("cache_hit", false);
        r.cex_layers = j.value("cex_layers", 0);
        r.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("optimizer_trace")) r.optimizer_trace = j.at("optimizer_trace").get<std::vector<double>>();
        if (r.d1 < 1 || r.d2 < 1 || r.dim != r.d1 * r.d2)
            throw Error(ErrorCode::Parse, "report: inconsistent dims");
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
    }
}

fs::path default_cache_dir() {
    if (const char* v = std::getenv("QDC_CACHE_DIR"); v && *v) return v;
    if (const char* v = std::getenv("XDG_CACHE_HOME"); v && *v) return fs::path(v) / "qdcompile";
    if (const char* v = std::getenv("HOME"); v && *v) return fs::path(v) / ".cache" / "qdcompile";
    return fs::path(".qdc-cache");
}

std::string cex_cache_key(const QuditSystem& sys, const NativeGate& native) {
    std::string dims = sys.d1 == sys.d2 ? std::to_string(sys.d1) : std::to_string(sys.d1) + "x" + std::to_string(sys.d2);
    std::string mode = !native.has_angle() ? "fixed" : native.free_angle ? "free" : "fixed";
    if (native.has_angle() && !native.free_angle && std::abs(native.theta - 3.14159265358979323846) > 1e-12) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", native.theta);
        mode += std::string("-") + buf;
    }
    return "cex_d" + dims + "_" + native.name() + "_" + mode + ".json";
}

CompilationResult obtain_cex_solution(const QuditSystem& sys, const NativeGate& native, const OptimizerConfig& cfg,
                                      const fs::path& cache_dir, bool use_cache, bool* cache_hit) {
    if (cache_hit) *cache_hit = false;
    if (native.kind == NativeKind::CEX) return trivial_cex_solution(sys);
    const fs::path dir = cache_dir.empty() ? default_cache_dir() : cache_dir;
    const fs::path file = dir / cex_cache_key(sys, native);
    if (use_cache && native.kind != NativeKind::Custom) {
        if (auto hit = load_cached(file, sys, native, cfg.target_infidelity)) {
            if (cache_hit) *cache_hit = true;
            return std::move(*hit);
        }
    }
    auto result = binary_search_layers(gate_matrix(standard_cex(), sys), sys, native, cfg);
    result.circuit.provenance = Provenance{"CEX(1;0,1)", "compile-cex"};
    if (use_cache && result.converged && native.kind != NativeKind::Custom) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create cache directory " + dir.string() + ": " + ec.message());
        write_text_file(file, circuit_to_json(result.circuit));
    }
    return result;
}

PipelineResult run_pipeline(const ComplexMatrix& u, const QuditSystem& sys, const PipelineOptions& opts) {
    sys.validate();
    opts.optimizer.validate();
    if (static_cast<int>(u.dim()) != sys.dim())
        throw Error(ErrorCode::DimensionMismatch, "input is " + std::to_string(u.dim()) + "x" +
                                                      std::to_string(u.dim()) + " but dims give " +
                                                      std::to_string(sys.dim()));
    validate_gate(opts.native.gate(), sys);

    const auto start = Clock::now();
    PipelineResult out;
    CompilationReport& r = out.report;
    r.system = system_label(sys);
    r.d1 = sys.d1;
    r.d2 = sys.d2;
    r.dim = sys.dim();
    r.native = opts.native.name();
    r.stage = std::string(stage_name(opts.stage));
    r.seed = opts.optimizer.seed;

    auto finish = [&](Circuit c, const std::string& stage) {
        c.provenance = Provenance{opts.source, stage};
        out.circuit = std::move(c);
        r.total_time_s = seconds_since(start);
        return std::move(out);
    };

    if (opts.stage == Stage::CompileCex) {
        const auto t = Clock::now();
        const auto sol = obtain_cex_solution(sys, opts.native, opts.optimizer, opts.cache_dir, opts.use_cache,
                                             &r.cache_hit);
        r.compile_time_s = seconds_since(t);
        fill_counts(r, sol.circuit);
        r.cex_layers = sol.layers_used;
        r.cex_solution_infidelity = sol.achieved_infidelity;
        r.final_infidelity = sol.achieved_infidelity;
        r.converged = sol.converged;
        r.optimizer_trace = sol.optimizer_trace;
        return finish(sol.circuit, "compile-cex");
    }

    auto t = Clock::now();
    const SynthesisResult synth = synthesize(u, sys);
    Circuit classified = classified_circuit(synth);
    r.synthesis_time_s = seconds_since(t);
    for (const auto& g : classified.gates) {
        if (kind_of(g) == GateKind::CRot) ++r.crot;
        if (kind_of(g) == GateKind::PSwap) ++r.pswap;
    }
    r.synthesis_infidelity = infidelity_of(classified, u);
    r.final_infidelity = r.synthesis_infidelity;
    if (opts.stage == Stage::Synthesize) return finish(std::move(classified), "synthesize");

    t = Clock::now();
    Circuit lowered = lower_classified(synth.classified, sys);
    r.lowering_time_s = seconds_since(t);
    fill_counts(r, lowered);
    r.lowered_infidelity = infidelity_of(lowered, u);
    r.final_infidelity = r.lowered_infidelity;
    if (opts.stage == Stage::Lower) return finish(std::move(lowered), "lower");
    if (opts.native.kind == NativeKind::CEX || r.cex_tot == 0) return finish(std::move(lowered), "full");

    t = Clock::now();
    const auto sol = obtain_cex_solution(sys, opts.native, opts.optimizer, opts.cache_dir, opts.use_cache,
                                         &r.cache_hit);
    Circuit full = substitute_cex(lowered, sol.circuit);
    r.compile_time_s = seconds_since(t);
    const std::size_t lowered_cex = r.cex_tot;
    fill_counts(r, full);
    r.cex_tot = lowered_cex;
    r.cex_layers = sol.layers_used;
    r.cex_solution_infidelity = sol.achieved_infidelity;
    r.converged = sol.converged;
    r.optimizer_trace = sol.optimizer_trace;
    r.final_infidelity = infidelity_of(full, u);
    return finish(std::move(full), "full");
}

VerifyReport verify_circuit(const Circuit& c, const ComplexMatrix& u, const QuditSystem& sys) {
    if (!(c.system == sys))
        throw Error(ErrorCode::DimensionMismatch, "circuit dims (" + std::to_string(c.system.d1) + ", " +
                                                      std::to_string(c.system.d2) + ") differ from unitary dims (" +
                                                      std::to_string(sys.d1) + ", " + std::to_string(sys.d2) + ")");
    VerifyReport v;
    v.fidelity = fidelity(evaluate(c), u).value;
    v.infidelity = 1.0 - v.fidelity;
    v.counts = count_gates(c);
    return v;
}

ReportTable render_report(const fs::path& dir) {
    ReportTable t;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
    std::vector<std::pair<std::string, CompilationReport>> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        try {
            found.emplace_back(entry.path().filename().string(), report_from_json(read_text_file(entry.path())));
        } catch (const Error& e) {
            t.warnings.push_back("skipping " + entry.path().string() + ": " + e.what());
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.second.dim != b.second.dim ? a.second.dim < b.second.dim : a.first < b.first;
    });

    const std::vector<std::string> header = {"System", "Dim.", "cRot", "pSwap", "CEX_tot", "MS_tot", "LS_tot", "(1-F)"};
    std::vector<std::vector<std::string>> cells = {header};
    json rows = json::array();
    for (auto& [name, r] : found) {
        cells.push_back({r.system, std::to_string(r.dim), std::to_string(r.crot), std::to_string(r.pswap),
                         std::to_string(r.cex_tot), std::to_string(r.ms_tot), std::to_string(r.ls_tot),
                         format_infidelity(r.final_infidelity)});
        rows.push_back({{"System", r.system},
                        {"Dim.", r.dim},
                        {"cRot", r.crot},
                        {"pSwap", r.pswap},
                        {"CEX_tot", r.cex_tot},
                        {"MS_tot", r.ms_tot},
                        {"LS_tot", r.ls_tot},
                        {"(1-F)", r.final_infidelity},
                        {"native", r.native},
                        {"converged", r.converged},
                        {"file", name}});
        t.rows.push_back(std::move(r));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += i + 1 == row.size() ? row[i] : pad(row[i], width[i] + 2);
        }
        t.text += line + "\n";
    }
    t.json = rows.dump(1);
    return t;
}

std::vector<CacheEntry> cache_list(const fs::path& dir) {
    std::vector<CacheEntry> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (!entry.is_regular_file() || name.rfind("cex_", 0) != 0 || entry.path().extension() != ".json") continue;
        CacheEntry e;
        e.file = name;
        try {
            const Circuit c = circuit_from_json(read_text_file(entry.path()));
            e.d1 = c.system.d1;
            e.d2 = c.system.d2;
            for (const auto& g : c.gates) {
                const GateKind k = kind_of(g);
                if (k == GateKind::CEX || k == GateKind::MS || k == GateKind::LS || k == GateKind::Custom) ++e.natives;
            }
            e.infidelity = infidelity_of(c, gate_matrix(standard_cex(), c.system));
        } catch (const Error&) {
            e.infidelity = 1.0;
        }
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
    return out;
}

std::size_t cache_clear(const fs::path& dir) {
    std::size_t removed = 0;
    for (const auto& e : cache_list(dir)) {
        std::error_code ec;
        if (fs::remove(dir / e.file, ec)) ++removed;
    }
    return removed;
}

}  // namespace qdc
