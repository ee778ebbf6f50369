#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdc/ansatz.hpp"
#include "qdc/variational.hpp"

namespace qdc {

enum class Stage { Synthesize, Lower, CompileCex, Full };

std::string_view stage_name(Stage s) noexcept;
std::optional<Stage> stage_from_name(std::string_view name) noexcept;

struct PipelineOptions {
    Stage stage = Stage::Full;
    NativeGate native = NativeGate::cex();
    OptimizerConfig optimizer;
    std::filesystem::path cache_dir;  // empty: default_cache_dir()
    bool use_cache = true;
    std::string source;  // recorded in circuit provenance
};

struct CompilationReport {
    std::string system;
    int d1 = 0;
    int d2 = 0;
    int dim = 0;
    std::string native;
    std::string stage;
    std::size_t crot = 0;
    std::size_t pswap = 0;
    std::size_t cex_tot = 0;
    std::size_t ms_tot = 0;
    std::size_t ls_tot = 0;
    double synthesis_infidelity = 0.0;
    double lowered_infidelity = 0.0;
    std::optional<double> cex_solution_infidelity;
    double final_infidelity = 0.0;
    double synthesis_time_s = 0.0;
    double lowering_time_s = 0.0;
    double compile_time_s = 0.0;
    double total_time_s = 0.0;
    bool converged = true;
    bool cache_hit = false;
    int cex_layers = 0;
    std::uint64_t seed = 0;
    std::vector<double> optimizer_trace;
};

struct PipelineResult {
    Circuit circuit;
    CompilationReport report;
};

std::string system_label(const QuditSystem& sys);

std::string report_to_json(const CompilationReport& r);
CompilationReport report_from_json(const std::string& text);

/// $QDC_CACHE_DIR, else $XDG_CACHE_HOME/qdcompile, else $HOME/.cache/qdcompile.
std::filesystem::path default_cache_dir();

/// Cache file name for a CEX decomposition, e.g. "cex_d3_ls_fixed.json".
std::string cex_cache_key(const QuditSystem& sys, const NativeGate& native);

/// Loads a cached CEX(1;0,1) decomposition meeting cfg.target_infidelity, or
/// runs binary_search_layers and stores converged results.
CompilationResult obtain_cex_solution(const QuditSystem& sys, const NativeGate& native, const OptimizerConfig& cfg,
                                      const std::filesystem::path& cache_dir, bool use_cache, bool* cache_hit);

/// synthesize -> classify -> standardize -> lower_to_cex -> compile CEX ->
/// substitute, stopping after opts.stage.
PipelineResult run_pipeline(const ComplexMatrix& u, const QuditSystem& sys, const PipelineOptions& opts);

struct VerifyReport {
    double fidelity = 0.0;
    double infidelity = 1.0;
    GateCounts counts;
};

VerifyReport verify_circuit(const Circuit& c, const ComplexMatrix& u, const QuditSystem& sys);

struct ReportTable {
    std::vector<CompilationReport> rows;  // sorted by dim
    std::vector<std::string> warnings;    // skipped files
    std::string text;
    std::string json;
};

ReportTable render_report(const std::filesystem::path& dir);

struct CacheEntry {
    std::string file;
    int d1 = 0;
    int d2 = 0;
    std::size_t natives = 0;
    double infidelity = 1.0;
};

std::vector<CacheEntry> cache_list(const std::filesystem::path& dir);
std::size_t cache_clear(const std::filesystem::path& dir);

}  // namespace qdc
