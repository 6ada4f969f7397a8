/* C interface to the temporal causal simulation library.
 *
 * Every call returns a tcs_status. On failure the message is available from
 * tcs_last_error() on the calling thread until the next failing call there.
 * Strings handed out through char** parameters belong to the caller and are
 * released with tcs_string_free. Handles are released with their _free
 * function; passing NULL to any _free function is a no-op.
 *
 * Configuration crosses the boundary as JSON text; see docs/config_schema.md.
 */
#ifndef TCS_TCS_H
#define TCS_TCS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TCS_API __declspec(dllexport)
#else
#define TCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tcs_status {
    TCS_OK = 0,
    TCS_E_USAGE = 1,    /* invalid argument or configuration */
    TCS_E_DATA = 2,     /* unusable input data or files */
    TCS_E_NUMERIC = 3,  /* numeric failure or non-convergence */
    TCS_E_INTERNAL = 4
} tcs_status;

typedef struct tcs_dataset tcs_dataset;
typedef struct tcs_graph tcs_graph;
typedef struct tcs_run tcs_run;

TCS_API const char* tcs_version(void);
TCS_API const char* tcs_last_error(void);
TCS_API void tcs_string_free(char* s);

/* 0 selects the hardware concurrency. */
TCS_API tcs_status tcs_set_threads(unsigned n);

/* ---- datasets (row-major values, one column per series) ---- */

TCS_API tcs_status tcs_dataset_load_csv(const char* path, int has_header, tcs_dataset** out);
TCS_API tcs_status tcs_dataset_from_array(const double* values, size_t rows, size_t cols,
                                          const char* const* names, tcs_dataset** out);
TCS_API tcs_status tcs_dataset_save_csv(const tcs_dataset* ds, const char* path);
TCS_API size_t tcs_dataset_rows(const tcs_dataset* ds);
TCS_API size_t tcs_dataset_cols(const tcs_dataset* ds);
TCS_API size_t tcs_dataset_imputed(const tcs_dataset* ds);
/* NULL when j is out of range. Valid for the lifetime of the handle. */
TCS_API const char* tcs_dataset_column_name(const tcs_dataset* ds, size_t j);
TCS_API tcs_status tcs_dataset_copy_values(const tcs_dataset* ds, double* out, size_t len);
TCS_API void tcs_dataset_free(tcs_dataset* ds);

/* ---- lagged graphs: {"n_vars", "max_lag", "edges": [[tau, i, j], ...]} ---- */

TCS_API tcs_status tcs_graph_from_json(const char* json, tcs_graph** out);
TCS_API tcs_status tcs_graph_load(const char* path, tcs_graph** out);
TCS_API tcs_status tcs_graph_to_json(const tcs_graph* g, char** out);
TCS_API tcs_status tcs_graph_save(const tcs_graph* g, const char* path);
TCS_API size_t tcs_graph_edge_count(const tcs_graph* g);
TCS_API tcs_status tcs_graph_shd(const tcs_graph* a, const tcs_graph* b, size_t* out);
TCS_API void tcs_graph_free(tcs_graph* g);

/* ---- operations ---- */

/* Generator config JSON in; data (columns V0..), true graph and the effective
 * config out. Any out pointer may be NULL. */
TCS_API tcs_status tcs_generate_synthetic(const char* config_json, tcs_dataset** data, tcs_graph** graph,
                                          char** config_echo);

/* CD config JSON in; graph, long-form scores CSV (lag,cause,effect,score) and a
 * discovery summary JSON out. Any out pointer may be NULL. */
TCS_API tcs_status tcs_discover(const tcs_dataset* data, const char* cd_config_json, tcs_graph** graph,
                                char** scores_csv, char** summary_json);

/* Full candidate search. The config JSON mirrors TCSConfig; absent fields take
 * library defaults. */
TCS_API tcs_status tcs_simulate(const tcs_dataset* data, const char* tcs_config_json, tcs_run** out);
TCS_API size_t tcs_run_selected(const tcs_run* run);
/* Simulated data and graph of the selected candidate. */
TCS_API tcs_status tcs_run_simulated(const tcs_run* run, tcs_dataset** out);
TCS_API tcs_status tcs_run_graph(const tcs_run* run, tcs_graph** out);
TCS_API tcs_status tcs_run_report_json(const tcs_run* run, char** out);
/* Wall-clock timings; kept apart from the report so the report is reproducible. */
TCS_API tcs_status tcs_run_timing_json(const tcs_run* run, char** out);
TCS_API void tcs_run_free(tcs_run* run);

/* options_json: {"detector_space": [...] | {"default_grid": [...]}, "seed": n,
 * "adf_lags": n}; NULL means defaults. */
TCS_API tcs_status tcs_evaluate(const tcs_dataset* real, const tcs_dataset* sim, const char* options_json,
                                char** report_json);

/* Checks any document this library emits or reads; *kind receives its type. */
TCS_API tcs_status tcs_validate_json(const char* json, char** kind);

#ifdef __cplusplus
}
#endif

#endif
