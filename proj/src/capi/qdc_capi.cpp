#include "qdc/qdc.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <numbers>
#include <string>

#include <json.hpp>

#include "qdc/error.hpp"
#include "qdc/pipeline.hpp"
#include "qdc/serialize.hpp"

struct qdc_unitary {
    qdc::UnitaryFile u;
};

struct qdc_circuit {
    qdc::Circuit c;
};

struct qdc_report {
    qdc::CompilationReport r;
};

namespace {

thread_local std::string g_last_error;

qdc_status set_error(qdc_status status, std::string msg) {
    g_last_error = std::move(msg);
    return status;
}

template <typename F>
qdc_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const qdc::Error& e) {
        return set_error(static_cast<qdc_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(QDC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(QDC_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw qdc::Error(qdc::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

qdc::NativeGate native_from(const qdc_compile_options& o) {
    switch (o.native) {
        case QDC_NATIVE_CEX: return qdc::NativeGate::cex();
        case QDC_NATIVE_MS: return qdc::NativeGate::ms(o.native_theta, o.free_angle != 0);
        case QDC_NATIVE_LS: return qdc::NativeGate::ls(o.native_theta, o.free_angle != 0);
    }
    throw qdc::Error(qdc::ErrorCode::InvalidArgument, "unknown native gate");
}

qdc::Stage stage_from(qdc_stage s) {
    switch (s) {
        case QDC_STAGE_SYNTHESIZE: return qdc::Stage::Synthesize;
        case QDC_STAGE_LOWER: return qdc::Stage::Lower;
        case QDC_STAGE_COMPILE_CEX: return qdc::Stage::CompileCex;
        case QDC_STAGE_FULL: return qdc::Stage::Full;
    }
    throw qdc::Error(qdc::ErrorCode::InvalidArgument, "unknown stage");
}

}  // namespace

extern "C" {

const char* qdc_version(void) { return "0.1.0"; }

const char* qdc_last_error(void) { return g_last_error.c_str(); }

const char* qdc_status_name(qdc_status status) {
    switch (status) {
        case QDC_OK: return "ok";
        case QDC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case QDC_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case QDC_ERR_PARSE: return "parse error";
        case QDC_ERR_NOT_UNITARY: return "not unitary";
        case QDC_ERR_NOT_CONVERGED: return "not converged";
        case QDC_ERR_IO: return "i/o error";
        case QDC_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

void qdc_string_free(char* s) { std::free(s); }

qdc_status qdc_unitary_from_json(const char* text, qdc_unitary** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new qdc_unitary{qdc::unitary_from_json(text)};
        return QDC_OK;
    });
}

qdc_status qdc_unitary_load(const char* path, qdc_unitary** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new qdc_unitary{qdc::unitary_from_json(qdc::read_text_file(path))};
        return QDC_OK;
    });
}

qdc_status qdc_unitary_from_array(int d1, int d2, const double* re_im, qdc_unitary** out) {
    return guarded([&] {
        require(re_im, "re_im");
        require(out, "out");
        const qdc::QuditSystem sys{d1, d2};
        sys.validate();
        const auto n = static_cast<std::size_t>(sys.dim());
        qdc::ComplexMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = {re_im[2 * (i * n + j)], re_im[2 * (i * n + j) + 1]};
        *out = new qdc_unitary{{sys, std::move(m)}};
        return QDC_OK;
    });
}

qdc_status qdc_unitary_named(const char* name, int d1, int d2, qdc_unitary** out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        const qdc::QuditSystem sys{d1, d2};
        sys.validate();
        *out = new qdc_unitary{{sys, qdc::build_named(name, sys)}};
        return QDC_OK;
    });
}

qdc_status qdc_unitary_dims(const qdc_unitary* u, int* d1, int* d2) {
    return guarded([&] {
        require(u, "unitary");
        if (d1) *d1 = u->u.system.d1;
        if (d2) *d2 = u->u.system.d2;
        return QDC_OK;
    });
}

qdc_status qdc_unitary_entry(const qdc_unitary* u, size_t row, size_t col, double* re, double* im) {
    return guarded([&] {
        require(u, "unitary");
        if (row >= u->u.matrix.dim() || col >= u->u.matrix.dim())
            throw qdc::Error(qdc::ErrorCode::InvalidArgument, "entry index out of range");
        const auto v = u->u.matrix(row, col);
        if (re) *re = v.real();
        if (im) *im = v.imag();
        return QDC_OK;
    });
}

qdc_status qdc_unitary_to_json(const qdc_unitary* u, char** out) {
    return guarded([&] {
        require(u, "unitary");
        require(out, "out");
        *out = dup_string(qdc::unitary_to_json(u->u));
        return QDC_OK;
    });
}

void qdc_unitary_free(qdc_unitary* u) { delete u; }

qdc_status qdc_circuit_from_json(const char* text, qdc_circuit** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new qdc_circuit{qdc::circuit_from_json(text)};
        return QDC_OK;
    });
}

qdc_status qdc_circuit_load(const char* path, qdc_circuit** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new qdc_circuit{qdc::circuit_from_json(qdc::read_text_file(path))};
        return QDC_OK;
    });
}

qdc_status qdc_circuit_to_json(const qdc_circuit* c, char** out) {
    return guarded([&] {
        require(c, "circuit");
        require(out, "out");
        *out = dup_string(qdc::circuit_to_json(c->c));
        return QDC_OK;
    });
}

qdc_status qdc_circuit_save(const qdc_circuit* c, const char* path) {
    return guarded([&] {
        require(c, "circuit");
        require(path, "path");
        qdc::write_text_file(path, qdc::circuit_to_json(c->c));
        return QDC_OK;
    });
}

qdc_status qdc_circuit_dims(const qdc_circuit* c, int* d1, int* d2) {
    return guarded([&] {
        require(c, "circuit");
        if (d1) *d1 = c->c.system.d1;
        if (d2) *d2 = c->c.system.d2;
        return QDC_OK;
    });
}

qdc_status qdc_circuit_size(const qdc_circuit* c, size_t* out) {
    return guarded([&] {
        require(c, "circuit");
        require(out, "out");
        *out = c->c.size();
        return QDC_OK;
    });
}

qdc_status qdc_circuit_count(const qdc_circuit* c, const char* kind, size_t* out) {
    return guarded([&] {
        require(c, "circuit");
        require(kind, "kind");
        require(out, "out");
        const auto k = qdc::kind_from_name(kind);
        if (!k) throw qdc::Error(qdc::ErrorCode::InvalidArgument, std::string("unknown gate kind: ") + kind);
        *out = qdc::count_kind(c->c, *k);
        return QDC_OK;
    });
}

qdc_status qdc_circuit_evaluate(const qdc_circuit* c, qdc_unitary** out) {
    return guarded([&] {
        require(c, "circuit");
        require(out, "out");
        *out = new qdc_unitary{{c->c.system, qdc::evaluate(c->c)}};
        return QDC_OK;
    });
}

void qdc_circuit_free(qdc_circuit* c) { delete c; }

void qdc_compile_options_init(qdc_compile_options* opts) {
    if (!opts) return;
    *opts = qdc_compile_options{};
    opts->stage = QDC_STAGE_FULL;
    opts->native = QDC_NATIVE_CEX;
    opts->native_theta = std::numbers::pi;
    opts->free_angle = 0;
    opts->target_infidelity = 1e-3;
    opts->time_limit_s = 0.0;
    opts->extended_budget = 0;
    opts->max_layers = 0;
    opts->restarts = 4;
    opts->seed = 0;
    opts->cache_dir = nullptr;
    opts->use_cache = 1;
    opts->source = nullptr;
}

qdc_status qdc_compile(const qdc_unitary* u, const qdc_compile_options* opts, qdc_circuit** circuit,
                       qdc_report** report) {
    return guarded([&] {
        require(u, "unitary");
        require(opts, "options");
        const qdc::QuditSystem& sys = u->u.system;
        const int d = std::max(sys.d1, sys.d2);
        qdc::PipelineOptions p;
        p.stage = stage_from(opts->stage);
        p.native = native_from(*opts);
        p.optimizer = opts->extended_budget ? qdc::OptimizerConfig::extended_budget(d) : qdc::OptimizerConfig::defaults_for(d);
        if (!opts->extended_budget && opts->time_limit_s > 0.0) p.optimizer.time_limit_s = opts->time_limit_s;
        p.optimizer.target_infidelity = opts->target_infidelity;
        p.optimizer.max_layers = opts->max_layers;
        p.optimizer.restarts = opts->restarts;
        p.optimizer.seed = opts->seed;
        if (opts->cache_dir) p.cache_dir = opts->cache_dir;
        p.use_cache = opts->use_cache != 0;
        if (opts->source) p.source = opts->source;

        auto result = qdc::run_pipeline(u->u.matrix, sys, p);
        const bool converged = result.report.converged;
        if (circuit) *circuit = new qdc_circuit{std::move(result.circuit)};
        if (report) *report = new qdc_report{std::move(result.report)};
        if (!converged)
            return set_error(QDC_ERR_NOT_CONVERGED, "variational compilation did not reach the target infidelity");
        return QDC_OK;
    });
}

qdc_status qdc_report_to_json(const qdc_report* r, char** out) {
    return guarded([&] {
        require(r, "report");
        require(out, "out");
        *out = dup_string(qdc::report_to_json(r->r));
        return QDC_OK;
    });
}

qdc_status qdc_report_save(const qdc_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        qdc::write_text_file(path, qdc::report_to_json(r->r));
        return QDC_OK;
    });
}

qdc_status qdc_report_converged(const qdc_report* r, int* out) {
    return guarded([&] {
        require(r, "report");
        require(out, "out");
        *out = r->r.converged ? 1 : 0;
        return QDC_OK;
    });
}

qdc_status qdc_report_final_infidelity(const qdc_report* r, double* out) {
    return guarded([&] {
        require(r, "report");
        require(out, "out");
        *out = r->r.final_infidelity;
        return QDC_OK;
    });
}

void qdc_report_free(qdc_report* r) { delete r; }

qdc_status qdc_verify(const qdc_circuit* c, const qdc_unitary* u, double* fidelity) {
    return guarded([&] {
        require(c, "circuit");
        require(u, "unitary");
        require(fidelity, "fidelity");
        *fidelity = qdc::verify_circuit(c->c, u->u.matrix, u->u.system).fidelity;
        return QDC_OK;
    });
}

qdc_status qdc_report_table(const char* dir, int as_json, char** out, char** warnings) {
    return guarded([&] {
        require(dir, "dir");
        require(out, "out");
        const auto table = qdc::render_report(dir);
        std::string w;
        for (const auto& line : table.warnings) w += line + "\n";
        *out = dup_string(as_json ? table.json + "\n" : table.text);
        if (warnings) *warnings = dup_string(w);
        return QDC_OK;
    });
}

qdc_status qdc_cache_default_dir(char** out) {
    return guarded([&] {
        require(out, "out");
        *out = dup_string(qdc::default_cache_dir().string());
        return QDC_OK;
    });
}

qdc_status qdc_cache_list(const char* dir, char** out) {
    return guarded([&] {
        require(out, "out");
        const auto entries = qdc::cache_list(dir ? std::filesystem::path(dir) : qdc::default_cache_dir());
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : entries)
            j.push_back({{"file", e.file}, {"dims", {e.d1, e.d2}}, {"natives", e.natives}, {"infidelity", e.infidelity}});
        *out = dup_string(j.dump(1));
        return QDC_OK;
    });
}

qdc_status qdc_cache_clear(const char* dir, size_t* removed) {
    return guarded([&] {
        const auto n = qdc::cache_clear(dir ? std::filesystem::path(dir) : qdc::default_cache_dir());
        if (removed) *removed = n;
        return QDC_OK;
    });
}

}  // extern "C"
