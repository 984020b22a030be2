/* pushlex — a PushGP-style genetic programming engine with the lexicase
 * parent-selection family (standard, down-sampled, static-subsample,
 * truncated), strict execution-budget accounting and an experiment harness.
 *
 * This is the stable C surface of the shared library. Configuration, results
 * and genomes travel as JSON strings; run results are held behind an opaque
 * handle. All functions are thread-safe: the library keeps no global mutable
 * state, and every run derives its randomness from the seed in its config.
 */

#ifndef PUSHLEX_H
#define PUSHLEX_H

#include <stdint.h>

#if defined(_WIN32)
#define PUSHLEX_API __declspec(dllexport)
#else
#define PUSHLEX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plx_status {
    PLX_OK = 0,
    PLX_ERROR_INVALID_ARGUMENT = 1, /* bad parameter or config value */
    PLX_ERROR_PARSE = 2,            /* malformed JSON or dataset */
    PLX_ERROR_UNKNOWN_NAME = 3,     /* unknown problem, mode or instruction */
    PLX_ERROR_IO = 4,               /* file could not be read */
    PLX_ERROR_PRECONDITION = 5,     /* operation precondition violated */
    PLX_ERROR_INTERNAL = 6,
} plx_status;

/* Opaque handle to a completed evolutionary run. */
typedef struct plx_result plx_result;

PUSHLEX_API const char* plx_version(void);
PUSHLEX_API const char* plx_status_name(plx_status status);

/* Frees any string returned through a char** out-parameter. */
PUSHLEX_API void plx_string_free(char* s);

/* Runs one evolutionary run described by a RunConfig JSON object, e.g.
 *   {"problem": "smallest", "seed": 7, "population": 200,
 *    "generations": 100, "mode": "downsample_gens", "d": 0.25}
 * Unknown keys are rejected. On success *result_out owns the run result;
 * release it with plx_result_free. On failure, *err_out (when non-NULL)
 * receives a description to release with plx_string_free. */
PUSHLEX_API plx_status plx_run(const char* config_json, plx_result** result_out, char** err_out);

/* Serializes the run result as a single JSON document (config echo, derived
 * schedule, success/generalization flags, execution counters, genomes). */
PUSHLEX_API plx_status plx_result_to_json(const plx_result* result, char** json_out);

/* Per-generation log records as JSON Lines: one object per generation with
 * best_error, diversity, hyperselection and the active subsample indices. */
PUSHLEX_API plx_status plx_result_log_jsonl(const plx_result* result, char** jsonl_out);

PUSHLEX_API void plx_result_free(plx_result* result);

/* Hill-climbing simplification of a genome (JSON array of {item, closes})
 * against the named problem's full training set, regenerated from `seed`
 * exactly as a run with that seed would. The genome must already pass the
 * training set (PLX_ERROR_PRECONDITION otherwise). */
PUSHLEX_API plx_status plx_simplify(const char* genome_json, const char* problem_name,
                                    uint64_t steps, uint64_t seed, char** genome_out,
                                    char** err_out);

/* Aggregates an array of run-result JSON documents into the experiment
 * summary: *csv_out receives one problem x method row per line, *table_out an
 * aligned text table with chi-squared/Holm significance stars. Either out
 * pointer may be NULL if not wanted. */
PUSHLEX_API plx_status plx_report(const char* results_array_json, char** csv_out,
                                  char** table_out, char** err_out);

/* The instruction registry as a JSON array of {name, opens, pops, pushes};
 * stable across runs of one build. */
PUSHLEX_API plx_status plx_instruction_set_json(char** json_out);

/* Names of the built-in benchmark problems as a JSON array. */
PUSHLEX_API plx_status plx_problem_names_json(char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* PUSHLEX_H */
