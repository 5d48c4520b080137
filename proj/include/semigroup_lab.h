/* C interface of the semigroup-lab shared library.
 *
 * All entry points are thread-compatible (one session per thread); report
 * strings are heap-allocated JSON documents owned by the caller and released
 * with sgl_string_free. Errors are reported through status codes, with the
 * message retrievable from the session (or sgl_global_error for the stateless
 * calls).
 */
#ifndef SEMIGROUP_LAB_H
#define SEMIGROUP_LAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sgl_session sgl_session;

typedef enum sgl_status {
    SGL_OK = 0,
    SGL_ERR_USAGE = 1,   /* bad arguments / malformed input */
    SGL_ERR_BREACH = 2,  /* a checked bound was violated (report still produced) */
    SGL_ERR_CONFIG = 3,  /* configuration rejected */
    SGL_ERR_NUMERIC = 4, /* numerical failure (factorization, divergence, ...) */
    SGL_ERR_INTERNAL = 5
} sgl_status;

const char* sgl_version(void);

sgl_session* sgl_session_new(void);
void sgl_session_free(sgl_session* s);

/* Message of the most recent failing call on this session. */
const char* sgl_session_last_error(const sgl_session* s);

sgl_status sgl_session_set_seed(sgl_session* s, uint64_t seed);
sgl_status sgl_session_set_threads(sgl_session* s, int threads);

/* Load the problem configuration (JSON text; see the library docs for the
 * schema: grid/A/b1/b2/Q/constants/mode). */
sgl_status sgl_session_load_config(sgl_session* s, const char* config_json);

/* Subcommand drivers. options_json may be NULL or "{}"; each returns a JSON
 * report through *report_json (caller frees). A breach in a checked bound
 * yields SGL_ERR_BREACH with the report still filled in. */
sgl_status sgl_run_analyze(sgl_session* s, const char* options_json, char** report_json);
sgl_status sgl_run_interval(sgl_session* s, const char* constants_json, const char* options_json,
                            char** report_json);
sgl_status sgl_run_simulate(sgl_session* s, const char* options_json, char** report_json);
sgl_status sgl_run_verify(sgl_session* s, const char* options_json, char** report_json);
sgl_status sgl_run_example(sgl_session* s, const char* name, const char* params_json,
                           char** report_json);

/* Stateless expression front end: parses a coefficient-DSL expression and
 * returns {"ok":true, "canonical": "...", "value_at": ...} or
 * {"ok":false, "error": {...}} with position info. */
sgl_status sgl_parse_expr(const char* text, double x, double y, char** result_json);

/* Message of the most recent failing stateless call. */
const char* sgl_global_error(void);

void sgl_string_free(char* str);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEMIGROUP_LAB_H */
