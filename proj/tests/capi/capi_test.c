/* Exercises the C interface from C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "sloop/sloop.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(void) {
    EXPECT(strcmp(sloop_version(), "0.1.0") == 0);
    EXPECT(strcmp(sloop_status_name(SLOOP_ERR_PARSE), "parse error") == 0);

    sloop_program* prog = NULL;
    EXPECT(sloop_program_parse("p(a). q(b). r(X) :- p(X), not q(X).", &prog) == SLOOP_OK);
    char* text = NULL;
    EXPECT(sloop_program_to_string(prog, &text) == SLOOP_OK);
    EXPECT(text && strstr(text, "r(X) :- p(X), not q(X).") != NULL);
    sloop_string_free(text);

    sloop_formula* f = NULL;
    EXPECT(sloop_program_formula(prog, &f) == SLOOP_OK);
    sloop_interpretation* good = NULL;
    sloop_interpretation* bad = NULL;
    EXPECT(sloop_interpretation_parse("universe a b. const a = a. const b = b. pred p/1 = { (a) }. "
                                      "pred q/1 = { (b) }. pred r/1 = { (a) }.",
                                      &good) == SLOOP_OK);
    EXPECT(sloop_interpretation_parse("universe a b. const a = a. const b = b. pred p/1 = { (a), (b) }. "
                                      "pred q/1 = { (b) }. pred r/1 = { (a) }.",
                                      &bad) == SLOOP_OK);
    int result = -1;
    EXPECT(sloop_check_sm(f, good, NULL, &result) == SLOOP_OK && result == 1);
    EXPECT(sloop_check_sm(f, bad, NULL, &result) == SLOOP_OK && result == 0);
    EXPECT(sloop_check_sm(f, bad, "r/1", &result) == SLOOP_OK && result == 1);
    EXPECT(sloop_check_sm(f, good, "r", &result) == SLOOP_ERR_INVALID_ARGUMENT);

    sloop_formula* g = NULL;
    EXPECT(sloop_formula_parse("forall X (p(X) -> ", &g) == SLOOP_ERR_PARSE);
    EXPECT(g == NULL);
    EXPECT(strlen(sloop_last_error()) > 0);
    EXPECT(sloop_formula_parse("exists X (p(X))", &g) == SLOOP_OK);
    EXPECT(sloop_formula_to_string(g, &text) == SLOOP_OK);
    EXPECT(text && strcmp(text, "exists X (p(X))") == 0);
    sloop_string_free(text);

    char* out = NULL;
    int code = -1;
    EXPECT(sloop_run("models", "p(a). q(b). r(X) :- p(X), not q(X).", "{\"herbrand\": true}", &out, &code) == SLOOP_OK);
    EXPECT(code == 0);
    EXPECT(out && strcmp(out, "p={(a)}, q={(b)}, r={(a)}\n") == 0);
    sloop_string_free(out);
    out = NULL;
    EXPECT(sloop_run("models", "p.", "{\"no_such_option\": 1}", &out, &code) == SLOOP_ERR_INVALID_ARGUMENT);
    EXPECT(out == NULL);
    EXPECT(sloop_run("models", "p.", "[1]", &out, &code) == SLOOP_ERR_INVALID_ARGUMENT);
    EXPECT(sloop_run("nope", "p.", NULL, &out, &code) != SLOOP_OK);
    EXPECT(sloop_run(NULL, "p.", NULL, &out, &code) == SLOOP_ERR_INVALID_ARGUMENT);

    sloop_formula_free(f);
    sloop_formula_free(g);
    sloop_interpretation_free(good);
    sloop_interpretation_free(bad);
    sloop_program_free(prog);
    sloop_program_free(NULL);

    if (failures) {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("C interface: all checks passed\n");
    return 0;
}
