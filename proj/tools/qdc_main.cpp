#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdc/qdc.h"

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitNotUnitary = 3;
constexpr int kExitNotConverged = 4;
constexpr int kExitIo = 5;

struct UnitaryDeleter {
    void operator()(qdc_unitary* u) const { qdc_unitary_free(u); }
};
struct CircuitDeleter {
    void operator()(qdc_circuit* c) const { qdc_circuit_free(c); }
};
struct ReportDeleter {
    void operator()(qdc_report* r) const { qdc_report_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { qdc_string_free(s); }
};
using UnitaryPtr = std::unique_ptr<qdc_unitary, UnitaryDeleter>;
using CircuitPtr = std::unique_ptr<qdc_circuit, CircuitDeleter>;
using ReportPtr = std::unique_ptr<qdc_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code(qdc_status s) {
    switch (s) {
        case QDC_OK: return kExitOk;
        case QDC_ERR_PARSE:
        case QDC_ERR_INVALID_ARGUMENT:
        case QDC_ERR_DIMENSION_MISMATCH: return kExitParse;
        case QDC_ERR_NOT_UNITARY: return kExitNotUnitary;
        case QDC_ERR_NOT_CONVERGED: return kExitNotConverged;
        case QDC_ERR_IO: return kExitIo;
        default: return kExitFailure;
    }
}

int fail(qdc_status s) {
    std::cerr << "qdc: " << qdc_status_name(s) << ": " << qdc_last_error() << "\n";
    return exit_code(s);
}

struct CompileArgs {
    std::string input;
    std::vector<int> dims;
    std::string native = "cex";
    double native_theta = 3.14159265358979323846;
    bool free_angle = false;
    double target_infidelity = 1e-3;
    double time_limit_s = 0.0;
    bool extended_budget = false;
    int max_layers = 0;
    int restarts = 4;
    std::uint64_t seed = 0;
    std::string cache_dir;
    bool no_cache = false;
    std::string output;
    std::string report;
    std::string stage = "full";
};

struct VerifyArgs {
    std::string circuit;
    std::string unitary;
    double threshold = 1e-3;
};

const std::vector<std::string> kGateKinds = {"CRot", "PSwap", "CEX",  "MS",        "LS",      "LocalR",
                                             "PhaseZ", "Perm", "EmbeddedH", "VirtualR", "Custom"};

int run_compile(const CompileArgs& a) {
    qdc_compile_options opts;
    qdc_compile_options_init(&opts);
    if (a.stage == "synthesize") opts.stage = QDC_STAGE_SYNTHESIZE;
    else if (a.stage == "lower") opts.stage = QDC_STAGE_LOWER;
    else if (a.stage == "compile-cex") opts.stage = QDC_STAGE_COMPILE_CEX;
    else opts.stage = QDC_STAGE_FULL;
    opts.native = a.native == "ms" ? QDC_NATIVE_MS : a.native == "ls" ? QDC_NATIVE_LS : QDC_NATIVE_CEX;
    opts.native_theta = a.native_theta;
    opts.free_angle = a.free_angle ? 1 : 0;
    opts.target_infidelity = a.target_infidelity;
    opts.time_limit_s = a.time_limit_s;
    opts.extended_budget = a.extended_budget ? 1 : 0;
    opts.max_layers = a.max_layers;
    opts.restarts = a.restarts;
    opts.seed = a.seed;
    opts.cache_dir = a.cache_dir.empty() ? nullptr : a.cache_dir.c_str();
    opts.use_cache = a.no_cache ? 0 : 1;
    opts.source = a.input.empty() ? nullptr : a.input.c_str();

    qdc_unitary* raw = nullptr;
    qdc_status s;
    if (!a.input.empty()) {
        s = qdc_unitary_load(a.input.c_str(), &raw);
    } else if (opts.stage == QDC_STAGE_COMPILE_CEX && a.dims.size() == 2) {
        s = qdc_unitary_named("IDENTITY", a.dims[0], a.dims[1], &raw);
    } else {
        std::cerr << "qdc: --input is required (only --stage compile-cex accepts --dims alone)\n";
        return kExitParse;
    }
    if (s != QDC_OK) return fail(s);
    UnitaryPtr u(raw);
    if (a.dims.size() == 2) {
        int d1 = 0, d2 = 0;
        qdc_unitary_dims(u.get(), &d1, &d2);
        if (d1 != a.dims[0] || d2 != a.dims[1]) {
            std::cerr << "qdc: --dims " << a.dims[0] << "," << a.dims[1] << " do not match the input dims " << d1
                      << "," << d2 << "\n";
            return kExitParse;
        }
    }

    qdc_circuit* craw = nullptr;
    qdc_report* rraw = nullptr;
    const qdc_status cs = qdc_compile(u.get(), &opts, &craw, &rraw);
    if (cs != QDC_OK && cs != QDC_ERR_NOT_CONVERGED) return fail(cs);
    CircuitPtr circuit(craw);
    ReportPtr report(rraw);

    if (!a.output.empty()) {
        if (auto w = qdc_circuit_save(circuit.get(), a.output.c_str()); w != QDC_OK) return fail(w);
    } else {
        char* text = nullptr;
        if (auto w = qdc_circuit_to_json(circuit.get(), &text); w != QDC_OK) return fail(w);
        StringPtr owned(text);
        std::cout << owned.get() << "\n";
    }
    if (!a.report.empty()) {
        if (auto w = qdc_report_save(report.get(), a.report.c_str()); w != QDC_OK) return fail(w);
    }

    char* rtext = nullptr;
    if (qdc_report_to_json(report.get(), &rtext) == QDC_OK) {
        StringPtr owned(rtext);
        const auto j = nlohmann::json::parse(owned.get());
        const auto& c = j.at("counts");
        std::cerr << j.at("system").get<std::string>() << " (D=" << j.at("dim").get<int>()
                  << "): cRot=" << c.at("cRot") << " pSwap=" << c.at("pSwap") << " CEX_tot=" << c.at("CEX_tot")
                  << " MS_tot=" << c.at("MS_tot") << " LS_tot=" << c.at("LS_tot")
                  << " infidelity=" << j.at("infidelity").at("final").get<double>()
                  << (j.at("converged").get<bool>() ? "" : " [not converged]") << "\n";
    }
    if (cs == QDC_ERR_NOT_CONVERGED) {
        std::cerr << "qdc: " << qdc_last_error() << "; partial result written\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_verify(const VerifyArgs& a) {
    qdc_circuit* craw = nullptr;
    if (auto s = qdc_circuit_load(a.circuit.c_str(), &craw); s != QDC_OK) return fail(s);
    CircuitPtr circuit(craw);
    qdc_unitary* uraw = nullptr;
    if (auto s = qdc_unitary_load(a.unitary.c_str(), &uraw); s != QDC_OK) return fail(s);
    UnitaryPtr u(uraw);
    double f = 0.0;
    if (auto s = qdc_verify(circuit.get(), u.get(), &f); s != QDC_OK) return fail(s);

    nlohmann::json out;
    out["fidelity"] = f;
    out["infidelity"] = 1.0 - f;
    out["threshold"] = a.threshold;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& k : kGateKinds) {
        std::size_t n = 0;
        qdc_circuit_count(circuit.get(), k.c_str(), &n);
        if (n > 0) counts[k] = n;
    }
    std::size_t total = 0;
    qdc_circuit_size(circuit.get(), &total);
    out["gates"] = total;
    out["counts"] = counts;
    out["pass"] = 1.0 - f <= a.threshold;
    std::cout << out.dump(1) << "\n";
    return 1.0 - f <= a.threshold ? kExitOk : kExitFailure;
}

int run_report(const std::string& dir, bool as_json) {
    char* text = nullptr;
    char* warnings = nullptr;
    if (auto s = qdc_report_table(dir.c_str(), as_json ? 1 : 0, &text, &warnings); s != QDC_OK) return fail(s);
    StringPtr t(text);
    StringPtr w(warnings);
    if (w && *w.get()) std::cerr << w.get();
    std::cout << t.get();
    return kExitOk;
}

int run_cache(bool clear, const std::string& dir) {
    const char* d = dir.empty() ? nullptr : dir.c_str();
    if (clear) {
        std::size_t removed = 0;
        if (auto s = qdc_cache_clear(d, &removed); s != QDC_OK) return fail(s);
        std::cout << "removed " << removed << " cached solution(s)\n";
        return kExitOk;
    }
    char* text = nullptr;
    if (auto s = qdc_cache_list(d, &text); s != QDC_OK) return fail(s);
    StringPtr t(text);
    std::cout << t.get() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qudit unitary compiler: Givens synthesis to CEX, variational compilation to MS / LS"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qdc_version()));

    CompileArgs ca;
    auto* compile = app.add_subcommand("compile", "Compile a two-qudit unitary");
    compile->add_option("-i,--input", ca.input, "Unitary JSON file");
    compile->add_option("--dims", ca.dims, "Qudit dimensions d1,d2")->expected(2)->delimiter(',');
    compile->add_option("--native", ca.native, "Target entangler")
        ->check(CLI::IsMember({"cex", "ms", "ls"}))
        ->capture_default_str();
    compile->add_option("--native-theta", ca.native_theta, "Fixed MS / LS angle")->capture_default_str();
    compile->add_flag("--free-angle", ca.free_angle, "Optimize the MS / LS angle of every layer");
    compile->add_option("--target-infidelity", ca.target_infidelity, "Variational target 1-F")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    compile->add_option("--time-limit-s", ca.time_limit_s,
                        "Seconds per layer-count probe (default 60 for qubits, 600 otherwise)");
    compile->add_flag("--extended-budget", ca.extended_budget, "Use d/4 hours per layer-count probe");
    compile->add_option("--max-layers", ca.max_layers, "Layer cap for the search (default 2 d^2)");
    compile->add_option("--restarts", ca.restarts, "Annealing restarts per probe")->capture_default_str();
    compile->add_option("--seed", ca.seed, "Random seed")->capture_default_str();
    compile->add_option("--cache-dir", ca.cache_dir, "Directory of pre-computed CEX solutions");
    compile->add_flag("--no-cache", ca.no_cache, "Neither read nor write cached CEX solutions");
    compile->add_option("-o,--output", ca.output, "Circuit JSON output (default: stdout)");
    compile->add_option("--report", ca.report, "Report JSON output");
    compile->add_option("--stage", ca.stage, "Last pipeline stage to run")
        ->check(CLI::IsMember({"synthesize", "lower", "compile-cex", "full"}))
        ->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Compare a circuit against a unitary");
    verify->add_option("--circuit", va.circuit, "Circuit JSON file")->required();
    verify->add_option("--unitary", va.unitary, "Unitary JSON file")->required();
    verify->add_option("--threshold", va.threshold, "Maximum accepted infidelity")->capture_default_str();

    std::string report_dir;
    bool report_json = false;
    auto* report = app.add_subcommand("report", "Tabulate report JSON files");
    report->add_option("dir", report_dir, "Directory of report JSON files")->required();
    report->add_flag("--json", report_json, "Emit JSON instead of a text table");

    std::string cache_dir;
    auto* cache = app.add_subcommand("cache", "Manage pre-computed CEX solutions");
    cache->require_subcommand(1);
    auto* cache_ls = cache->add_subcommand("list", "List cached solutions");
    auto* cache_rm = cache->add_subcommand("clear", "Delete cached solutions");
    for (auto* sub : {cache_ls, cache_rm}) sub->add_option("--cache-dir", cache_dir, "Cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParse;
    }

    if (*compile) return run_compile(ca);
    if (*verify) return run_verify(va);
    if (*report) return run_report(report_dir, report_json);
    if (*cache) return run_cache(cache_rm->parsed(), cache_dir);
    return kExitParse;
}
