#ifndef IDEREG_H
#define IDEREG_H

/* C interface to the impulsive integro-differential BVP solver.
 *
 * All entry points are thread-compatible: handles are not shared state, and a
 * handle must not be used from two threads at once. Reports are UTF-8 JSON or
 * CSV text owned by the result handle.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI re-uses them verbatim as process exit codes. */
typedef enum idereg_status {
    IDEREG_OK = 0,
    IDEREG_INVALID_INPUT = 2,
    IDEREG_UNSOLVABLE = 3,
    IDEREG_NOT_REGULARIZABLE = 4,
    IDEREG_ORACLE_DISAGREEMENT = 5,
    IDEREG_INTERNAL_ERROR = 70
} idereg_status;

/* Opaque option bag; NULL everywhere means "document defaults". */
typedef struct idereg_options idereg_options;

idereg_options* idereg_options_new(void);
void idereg_options_free(idereg_options* opts);

/* keys: "rank_tol_rel", "solve_tol" */
idereg_status idereg_options_set_double(idereg_options* opts, const char* key, double value);
/* keys: "gauss_order", "samples", "oracle_nodes" */
idereg_status idereg_options_set_int(idereg_options* opts, const char* key, long value);
/* keys: "jump_model" ("free"|"none"), "objective" ("minnorm"|"weighted") */
idereg_status idereg_options_set_string(idereg_options* opts, const char* key,
                                        const char* value);
/* family parameters for solve */
idereg_status idereg_options_set_params(idereg_options* opts, const double* c, size_t len);
/* weighted-objective inputs, as {"matrix": [[...]]} / {"vector": [...]} documents */
idereg_status idereg_options_set_weight_json(idereg_options* opts, const char* json);
idereg_status idereg_options_set_uref_json(idereg_options* opts, const char* json);

/* Opaque command result: status code, report text, diagnostic message. */
typedef struct idereg_result idereg_result;

/* Each command parses the problem document and runs its pipeline. The returned
 * handle is never NULL except on allocation failure; free it with
 * idereg_result_free. opts may be NULL. */
idereg_result* idereg_analyze(const char* document_json, const idereg_options* opts);
idereg_result* idereg_solve(const char* document_json, const idereg_options* opts);
idereg_result* idereg_regularize(const char* document_json, const idereg_options* opts);
idereg_result* idereg_verify(const char* document_json, const idereg_options* opts);

int idereg_result_status(const idereg_result* res);
/* Report payload (JSON or CSV); empty string when the command failed early. */
const char* idereg_result_report(const idereg_result* res);
/* Human-readable diagnostic; empty string on success. */
const char* idereg_result_error(const idereg_result* res);
void idereg_result_free(idereg_result* res);

const char* idereg_version(void);

#ifdef __cplusplus
}
#endif

#endif /* IDEREG_H */
