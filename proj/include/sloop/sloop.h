/* C interface to the loop-formula toolkit. All strings are UTF-8 and NUL-terminated.
 * Strings returned through `char**` are owned by the caller and released with sloop_string_free.
 * On failure a function returns a nonzero status and sloop_last_error() describes it
 * (per thread, valid until the next failing call on that thread). */
#ifndef SLOOP_SLOOP_H
#define SLOOP_SLOOP_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SLOOP_BUILDING)
#define SLOOP_API __attribute__((visibility("default")))
#else
#define SLOOP_API
#endif

typedef enum sloop_status {
    SLOOP_OK = 0,
    SLOOP_ERR_PARSE = 1,
    SLOOP_ERR_SIGNATURE = 2,
    SLOOP_ERR_INVALID_ARGUMENT = 3,
    SLOOP_ERR_UNSUPPORTED = 4,
    SLOOP_ERR_BUDGET = 5,
    SLOOP_ERR_TOOL = 6,
    SLOOP_ERR_INTERNAL = 7
} sloop_status;

typedef struct sloop_program sloop_program;
typedef struct sloop_formula sloop_formula;
typedef struct sloop_interpretation sloop_interpretation;

SLOOP_API const char* sloop_version(void);
SLOOP_API const char* sloop_last_error(void);
SLOOP_API const char* sloop_status_name(sloop_status status);
SLOOP_API void sloop_string_free(char* s);

SLOOP_API sloop_status sloop_program_parse(const char* text, sloop_program** out);
SLOOP_API void sloop_program_free(sloop_program* p);
SLOOP_API sloop_status sloop_program_to_string(const sloop_program* p, char** out);
/* FOL representation of the program. */
SLOOP_API sloop_status sloop_program_formula(const sloop_program* p, sloop_formula** out);

SLOOP_API sloop_status sloop_formula_parse(const char* text, sloop_formula** out);
SLOOP_API void sloop_formula_free(sloop_formula* f);
SLOOP_API sloop_status sloop_formula_to_string(const sloop_formula* f, char** out);

SLOOP_API sloop_status sloop_interpretation_parse(const char* text, sloop_interpretation** out);
SLOOP_API void sloop_interpretation_free(sloop_interpretation* i);
SLOOP_API sloop_status sloop_interpretation_to_string(const sloop_interpretation* i, char** out);

/* Stable-model check of i for f. `intensional` is "p/1,q/2" or NULL for all predicates of f.
 * *result is set to 1 or 0. */
SLOOP_API sloop_status sloop_check_sm(const sloop_formula* f, const sloop_interpretation* i,
                                      const char* intensional, int* result);

/* Runs a command (analyze, loopformulas, completion, tptp, models, entail) on input text.
 * options_json: NULL or a JSON object with keys formula_input, simplify, assume_bounded,
 * herbrand, universe_size, intensional ("p/1,q/2"), prover_cmd, timeout, format, depth,
 * flavor, pipeline, queries (array of strings), budget, max_structures.
 * *exit_code: 0 success, 1 negative verdict. */
SLOOP_API sloop_status sloop_run(const char* command, const char* input, const char* options_json, char** output,
                                 int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
