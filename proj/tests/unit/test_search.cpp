#include <doctest.h>

#include <algorithm>

#include "sloop/oracle.hpp"
#include "sloop/parser.hpp"
#include "sloop/transform.hpp"
#include "support.hpp"

using namespace sloop;
using namespace sloop_test;

namespace {

std::vector<std::string> brute_force_models(const Formula& f, int n) {
    Signature sig = signature_of(f);
    std::vector<std::string> out;
    for_each_structure(sig.predicates(), sig.object_constants(), n, [&](const Interpretation& i) {
        if (ref_check_sm(f, i)) out.push_back(to_string(i));
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> searched_models(const Formula& f, int n) {
    std::vector<std::string> out;
    for (const auto& m : enumerate_stable_models(f, std::nullopt, n, false)) out.push_back(to_string(m));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("search finds exactly the brute-force stable models") {
    for (const char* name : {"default_negation.lp", "pq_cycle.lp", "any_self_support.lp", "guarded_fact.lp",
                             "cross_support.lp", "equality_guard.lp", "choice.lp", "closure.lp", "disjunction.lp",
                             "doubleneg.lp", "oddloop.lp", "disjunctive_head.lp"}) {
        CAPTURE(name);
        Formula f = fol_representation(corpus_program({name}));
        for (int n = 1; n <= 2; ++n) {
            CAPTURE(n);
            CHECK(searched_models(f, n) == brute_force_models(f, n));
        }
    }
    Formula semi = parse_formula(corpus_text("semi_safe.fol"));
    CHECK(searched_models(semi, 2) == brute_force_models(semi, 2));
}

TEST_CASE("herbrand enumeration of the default-negation program") {
    Formula f = fol_representation(corpus_program({"default_negation.lp"}));
    auto ms = enumerate_stable_models(f, std::nullopt, 0, true);
    REQUIRE(ms.size() == 1);
    CHECK(to_compact_string(ms[0]) == "p={(a)}, q={(b)}, r={(a)}");
}

TEST_CASE("herbrand mode needs constants and rejects functions") {
    CHECK_THROWS_AS(enumerate_stable_models(parse_formula("exists X (p(X))"), std::nullopt, 0, true), Error);
    CHECK_THROWS_AS(enumerate_stable_models(parse_formula("p(f(a))"), std::nullopt, 0, true), Error);
}

TEST_CASE("functions are enumerated as tables") {
    Formula f = parse_formula("p(f(a)) & forall X (p(X) -> q(X))");
    auto ms = enumerate_stable_models(f, std::nullopt, 2, false);
    // 2 values for a times 4 tables for f
    CHECK(ms.size() == 8);
    for (const auto& m : ms) CHECK(ref_check_sm(f, m));
}

TEST_CASE("visitor can stop early and the structure cap is enforced") {
    Formula f = fol_representation(corpus_program({"choice.lp"}));
    int seen = 0;
    for_each_stable_model(f, {{"p", 0}, {"q", 0}}, 1, false, [&](const Interpretation&) { return ++seen < 1; });
    CHECK(seen == 1);
    SearchOptions cap;
    cap.max_structures = 2;
    CHECK_THROWS_AS(enumerate_stable_models(parse_formula("p(a) & q(b) & r(c)"), std::nullopt, 2, false, cap), Error);
}

TEST_CASE("output order is deterministic") {
    Formula f = fol_representation(corpus_program({"disjunction.lp"}));
    auto a = enumerate_stable_models(f, std::nullopt, 2, false);
    auto b = enumerate_stable_models(f, std::nullopt, 2, false);
    CHECK(a == b);
}

TEST_CASE("finite entailment on the insurance rules") {
    Formula man = fol_representation(corpus_program({"insurance_rules.lp", "insurance_man.lp"}));
    Formula spouse = fol_representation(corpus_program({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}));
    auto r1 = check_entailment_finite(man, parse_formula("not exists X (married(X))"), std::nullopt, 2);
    CHECK(r1.kind == EntailmentResult::ConsistentUpTo);
    auto r2 = check_entailment_finite(spouse, parse_formula("not exists X (married(X))"), std::nullopt, 2);
    REQUIRE(r2.kind == EntailmentResult::Refuted);
    REQUIRE(r2.counter_model);
    CHECK(check_sm(spouse, *r2.counter_model));
    CHECK(eval(parse_formula("exists X (married(X))"), *r2.counter_model));
}

TEST_CASE("query symbols outside the program") {
    Formula f = parse_formula("p(a)");
    auto r = check_entailment_finite(f, parse_formula("p(b)"), std::nullopt, 2);
    CHECK(r.kind == EntailmentResult::Refuted);
    CHECK_THROWS_AS(check_entailment_finite(f, parse_formula("p(g(a))"), std::nullopt, 1), Error);
}

}  // TEST_SUITE
