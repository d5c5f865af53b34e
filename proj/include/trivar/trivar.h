/* trivar: degeneracy detection for structured triple systems.
 *
 * C surface over the exact-arithmetic core. All inputs and outputs are
 * JSON strings; the instance schema and report shapes are documented in
 * the README. Every returned char* is heap-allocated and must be released
 * with trivar_string_free. Handles are opaque and single-owner.
 *
 * Thread safety: distinct handles may be used from distinct threads;
 * sharing one handle across threads requires external synchronization.
 * trivar_last_error is thread-local.
 */

#ifndef TRIVAR_H
#define TRIVAR_H

#if defined(_WIN32)
#define TRIVAR_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TRIVAR_API __attribute__((visibility("default")))
#else
#define TRIVAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trivar_status {
  TRIVAR_OK = 0,
  TRIVAR_ERR_INPUT = 2,    /* malformed JSON, schema violation, unsupported regime */
  TRIVAR_ERR_BUDGET = 3,   /* retry or work budget exhausted */
  TRIVAR_ERR_INTERNAL = 4, /* invariant breach inside the library */
  TRIVAR_ERR_NOMEM = 5
} trivar_status;

typedef struct trivar_instance trivar_instance;

/* Static storage; do not free. */
TRIVAR_API const char* trivar_version(void);

/* Thread-local message for the most recent failing call on this thread.
 * Static storage; do not free. Empty string when no failure occurred. */
TRIVAR_API const char* trivar_last_error(void);

/* Releases a string returned through any char** out-parameter here. */
TRIVAR_API void trivar_string_free(char* s);

/* --- instances ----------------------------------------------------- */

/* Parses an instance from its JSON form. */
TRIVAR_API trivar_status trivar_instance_from_json(const char* json, trivar_instance** out);

/* Generates a reproducible instance. spec_json fields (all optional):
 * {"family": "uniform-random" | "planted-collinear" | "planted-sparse" |
 *            "planted-vanishing" | "on-curves" | "grid" | "near-degenerate" |
 *            "highdim-flats",
 *  "n": int, "seed": int, "curve_b": name, "curve_c": name,
 *  "predicate": "collinear" | "unit-area" | "pair",
 *  "mag": int, "perturb_k": int, "d": int, "plant": bool,
 *  "parallel_flats": bool}                                             */
TRIVAR_API trivar_status trivar_instance_generate(const char* spec_json, trivar_instance** out);

/* Serializes the instance; indent < 0 gives compact output. */
TRIVAR_API trivar_status trivar_instance_to_json(const trivar_instance* inst, int indent, char** out);

/* Stable hex digest of the canonical serialization. */
TRIVAR_API trivar_status trivar_instance_digest(const trivar_instance* inst, char** out);

TRIVAR_API void trivar_instance_free(trivar_instance* inst);

/* --- operations ----------------------------------------------------- */

/* Decides whether the instance carries a vanishing triple.
 * options_json (all fields optional):
 * {"pipeline": "auto" | "211-line" | "211-general" | "211-alt" |
 *              "highdim" | "pair-demo" | "direct-sort",
 *  "seed": int, "g": int, "h": int, "D": int, "provider": name,
 *  "check_oracle": bool, "indent": int}
 * Report: {"instance_digest", "pipeline", "decision": {found, witness?,
 * ledger, diagnostics}, "wall_seconds", "config", "oracle_match"?}.     */
TRIVAR_API trivar_status trivar_solve(const trivar_instance* inst, const char* options_json,
                           char** report_out);

/* Exhaustive reference decision. options_json: {"limit": int (default 16),
 * "indent": int}. Report: {"found", "count", "triples": [[i,j,k],...],
 * "ledger"}. */
TRIVAR_API trivar_status trivar_oracle(const trivar_instance* inst, const char* options_json,
                            char** report_out);

/* Hierarchy statistics over the instance's A set, plus an optional random
 * line-query crossing sample. options_json: {"r": int, "D": int,
 * "provider": name, "seed": int, "queries": int, "indent": int}.       */
TRIVAR_API trivar_status trivar_partition_stats(const trivar_instance* inst, const char* options_json,
                                     char** report_out);

/* Scaling sweep. config_json:
 * {"family": name, "pipeline": name, "sizes": [ints ascending],
 *  "seeds": int, "seed0": int, "baselines": "auto" | "none" | "all",
 *  "threads": int, "budget_seconds": number, "indent": int}
 * Report: per-size median counted-test totals, log2-log2 slope fits for
 * the pipeline and baselines; "partial": true when the budget cut runs. */
TRIVAR_API trivar_status trivar_bench(const char* config_json, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* TRIVAR_H */
