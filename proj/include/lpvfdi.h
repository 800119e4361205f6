#ifndef LPVFDI_H
#define LPVFDI_H

/* C interface of the LPV fault-estimation library.
 *
 * All entry points returning lpvfdi_status never throw; on failure they
 * return a nonzero code and leave a human-readable message readable through
 * lpvfdi_last_error() (thread-local). Objects returned through out-pointers
 * are owned by the caller and released with the matching _free function.
 * Accessors on valid objects are infallible; out-of-range indices yield 0.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LPVFDI_API __declspec(dllexport)
#else
#define LPVFDI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpvfdi_status {
    LPVFDI_OK = 0,
    LPVFDI_ERR_ARGUMENT = 1,     /* bad pointer / value outside its domain */
    LPVFDI_ERR_CONFIG = 2,       /* config file unreadable or malformed */
    LPVFDI_ERR_NOT_ISOLABLE = 3, /* synthesis impossible for this model */
    LPVFDI_ERR_DIVERGED = 4,     /* simulation state blew up */
    LPVFDI_ERR_IO = 5,           /* file read/write failure */
    LPVFDI_ERR_INTERNAL = 6      /* unexpected library error */
} lpvfdi_status;

LPVFDI_API const char* lpvfdi_version(void);

/* Message of the most recent failing call on this thread ("" if none). */
LPVFDI_API const char* lpvfdi_last_error(void);

/* ------------------------------------------------------------------ */
/* configuration                                                       */

typedef struct lpvfdi_config lpvfdi_config;

LPVFDI_API lpvfdi_status lpvfdi_config_load(const char* path, lpvfdi_config** out);
LPVFDI_API lpvfdi_status lpvfdi_config_parse(const char* text, lpvfdi_config** out);
LPVFDI_API lpvfdi_status lpvfdi_config_set(lpvfdi_config* cfg, const char* section,
                                           const char* key, const char* value);
LPVFDI_API void lpvfdi_config_free(lpvfdi_config* cfg);

/* ------------------------------------------------------------------ */
/* simulation                                                          */

typedef struct lpvfdi_simlog lpvfdi_simlog;

LPVFDI_API lpvfdi_status lpvfdi_simulate(const lpvfdi_config* cfg, lpvfdi_simlog** out);

LPVFDI_API size_t lpvfdi_simlog_rows(const lpvfdi_simlog* log);
LPVFDI_API size_t lpvfdi_simlog_cols(const lpvfdi_simlog* log);
LPVFDI_API const char* lpvfdi_simlog_column_name(const lpvfdi_simlog* log, size_t col);
LPVFDI_API double lpvfdi_simlog_value(const lpvfdi_simlog* log, size_t row, size_t col);

/* path "-" writes the CSV to stdout. */
LPVFDI_API lpvfdi_status lpvfdi_simlog_write_csv(const lpvfdi_simlog* log,
                                                 const char* path);
LPVFDI_API void lpvfdi_simlog_free(lpvfdi_simlog* log);

/* ------------------------------------------------------------------ */
/* isolability survey                                                  */

typedef struct lpvfdi_check_report lpvfdi_check_report;

LPVFDI_API lpvfdi_status lpvfdi_check(const lpvfdi_config* cfg,
                                      lpvfdi_check_report** out);

LPVFDI_API size_t lpvfdi_check_count(const lpvfdi_check_report* rep);
LPVFDI_API int lpvfdi_check_all_isolable(const lpvfdi_check_report* rep);
LPVFDI_API int lpvfdi_check_isolable(const lpvfdi_check_report* rep, size_t i);
LPVFDI_API int lpvfdi_check_rank_h(const lpvfdi_check_report* rep, size_t i);
LPVFDI_API int lpvfdi_check_rank_hf(const lpvfdi_check_report* rep, size_t i);
LPVFDI_API double lpvfdi_check_window_start(const lpvfdi_check_report* rep, size_t i);
LPVFDI_API size_t lpvfdi_check_window_size(const lpvfdi_check_report* rep, size_t i);
LPVFDI_API double lpvfdi_check_window_value(const lpvfdi_check_report* rep, size_t i,
                                            size_t j);
LPVFDI_API void lpvfdi_check_report_free(lpvfdi_check_report* rep);

/* ------------------------------------------------------------------ */
/* timing benchmark                                                    */

typedef struct lpvfdi_bench_stats {
    double mean_s;
    double median_s;
    double p99_s;
    double max_s;
    double sampling_period_s; /* h of the benchmarked model */
    int64_t steps;            /* timed filter evaluations (warm-up excluded) */
    int32_t threads;          /* worker threads actually used */
} lpvfdi_bench_stats;

/* max_threads <= 0 means "no explicit cap" (hardware concurrency). */
LPVFDI_API lpvfdi_status lpvfdi_bench(const lpvfdi_config* cfg, int max_threads,
                                      lpvfdi_bench_stats* out);

/* ------------------------------------------------------------------ */
/* run manifest                                                        */

/* Writes manifest_path: a [manifest] section (command, version, seed, wall
 * clock, digest of the file at output_path) followed by the fully resolved
 * configuration, so the manifest itself re-runs as a config. For simulate
 * CSVs the digest covers the payload with the wall-clock timing column
 * stripped, keeping it reproducible across re-runs. */
LPVFDI_API lpvfdi_status lpvfdi_write_manifest(const lpvfdi_config* cfg,
                                               const char* command,
                                               const char* config_path,
                                               double wall_clock_s,
                                               const char* output_path,
                                               const char* manifest_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LPVFDI_H */
