/* C interface to the two-qudit compiler. All handles are opaque; strings
 * returned through char** are heap-allocated and released with
 * qdc_string_free. Functions report failures through qdc_status and leave a
 * thread-local message for qdc_last_error. */
#ifndef QDC_QDC_H
#define QDC_QDC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QDC_BUILDING_LIBRARY)
#    define QDC_API __declspec(dllexport)
#  else
#    define QDC_API __declspec(dllimport)
#  endif
#else
#  define QDC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdc_status {
    QDC_OK = 0,
    QDC_ERR_INVALID_ARGUMENT = 1,
    QDC_ERR_DIMENSION_MISMATCH = 2,
    QDC_ERR_PARSE = 3,
    QDC_ERR_NOT_UNITARY = 4,
    QDC_ERR_NOT_CONVERGED = 5,
    QDC_ERR_IO = 6,
    QDC_ERR_INTERNAL = 7
} qdc_status;

typedef enum qdc_stage {
    QDC_STAGE_SYNTHESIZE = 0,
    QDC_STAGE_LOWER = 1,
    QDC_STAGE_COMPILE_CEX = 2,
    QDC_STAGE_FULL = 3
} qdc_stage;

typedef enum qdc_native {
    QDC_NATIVE_CEX = 0,
    QDC_NATIVE_MS = 1,
    QDC_NATIVE_LS = 2
} qdc_native;

typedef struct qdc_unitary qdc_unitary;
typedef struct qdc_circuit qdc_circuit;
typedef struct qdc_report qdc_report;

typedef struct qdc_compile_options {
    qdc_stage stage;
    qdc_native native;
    double native_theta;      /* MS / LS angle, default pi */
    int free_angle;           /* nonzero: angle is optimized per layer */
    double target_infidelity; /* default 1e-3 */
    double time_limit_s;      /* per layer-count probe; 0 selects the per-dimension default */
    int extended_budget;      /* nonzero: d/4 hours per probe (overrides time_limit_s) */
    int max_layers;           /* 0: 2 d^2 */
    int restarts;             /* default 4 */
    uint64_t seed;            /* default 0 */
    const char* cache_dir;    /* NULL: environment / home default */
    int use_cache;            /* default 1 */
    const char* source;       /* provenance label, may be NULL */
} qdc_compile_options;

QDC_API const char* qdc_version(void);
QDC_API const char* qdc_last_error(void);
QDC_API const char* qdc_status_name(qdc_status status);
QDC_API void qdc_string_free(char* s);

/* Unitaries: {"dims": [d1, d2], "matrix": [[[re, im], ...], ...]}. */
QDC_API qdc_status qdc_unitary_from_json(const char* text, qdc_unitary** out);
QDC_API qdc_status qdc_unitary_load(const char* path, qdc_unitary** out);
/* Row-major interleaved (re, im) pairs, (d1 d2)^2 of them. */
QDC_API qdc_status qdc_unitary_from_array(int d1, int d2, const double* re_im, qdc_unitary** out);
/* "IDENTITY", "CSUM", "CEX", "MS", "LS" (MS / LS at angle pi). */
QDC_API qdc_status qdc_unitary_named(const char* name, int d1, int d2, qdc_unitary** out);
QDC_API qdc_status qdc_unitary_dims(const qdc_unitary* u, int* d1, int* d2);
QDC_API qdc_status qdc_unitary_entry(const qdc_unitary* u, size_t row, size_t col, double* re, double* im);
QDC_API qdc_status qdc_unitary_to_json(const qdc_unitary* u, char** out);
QDC_API void qdc_unitary_free(qdc_unitary* u);

QDC_API qdc_status qdc_circuit_from_json(const char* text, qdc_circuit** out);
QDC_API qdc_status qdc_circuit_load(const char* path, qdc_circuit** out);
QDC_API qdc_status qdc_circuit_to_json(const qdc_circuit* c, char** out);
QDC_API qdc_status qdc_circuit_save(const qdc_circuit* c, const char* path);
QDC_API qdc_status qdc_circuit_dims(const qdc_circuit* c, int* d1, int* d2);
QDC_API qdc_status qdc_circuit_size(const qdc_circuit* c, size_t* out);
/* Number of gates of a kind ("CEX", "MS", "LS", "CRot", "PSwap", ...). */
QDC_API qdc_status qdc_circuit_count(const qdc_circuit* c, const char* kind, size_t* out);
QDC_API qdc_status qdc_circuit_evaluate(const qdc_circuit* c, qdc_unitary** out);
QDC_API void qdc_circuit_free(qdc_circuit* c);

QDC_API void qdc_compile_options_init(qdc_compile_options* opts);

/* Runs the pipeline up to opts->stage. On QDC_ERR_NOT_CONVERGED both outputs
 * are still filled with the best partial result. */
QDC_API qdc_status qdc_compile(const qdc_unitary* u, const qdc_compile_options* opts, qdc_circuit** circuit,
                               qdc_report** report);

QDC_API qdc_status qdc_report_to_json(const qdc_report* r, char** out);
QDC_API qdc_status qdc_report_save(const qdc_report* r, const char* path);
QDC_API qdc_status qdc_report_converged(const qdc_report* r, int* out);
QDC_API qdc_status qdc_report_final_infidelity(const qdc_report* r, double* out);
QDC_API void qdc_report_free(qdc_report* r);

/* Fidelity |Tr(A^dagger B)| / D between the circuit's unitary and u. */
QDC_API qdc_status qdc_verify(const qdc_circuit* c, const qdc_unitary* u, double* fidelity);

/* Table of every report JSON in dir. *warnings (may be NULL) receives one
 * line per skipped file. */
QDC_API qdc_status qdc_report_table(const char* dir, int as_json, char** out, char** warnings);

QDC_API qdc_status qdc_cache_default_dir(char** out);
/* JSON array of {"file", "dims", "natives", "infidelity"}. */
QDC_API qdc_status qdc_cache_list(const char* dir, char** out);
QDC_API qdc_status qdc_cache_clear(const char* dir, size_t* removed);

#ifdef __cplusplus
}
#endif

#endif
