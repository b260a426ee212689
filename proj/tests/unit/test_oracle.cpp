#include <doctest.h>

#include "sloop/generators.hpp"
#include "sloop/oracle.hpp"
#include "sloop/parser.hpp"
#include "sloop/transform.hpp"
#include "support.hpp"

using namespace sloop;
using namespace sloop_test;

namespace {

const char* kSmallCorpus[] = {"default_negation.lp", "pq_cycle.lp",   "any_self_support.lp", "guarded_fact.lp",
                              "cross_support.lp",    "choice.lp",     "disjunction.lp",      "doubleneg.lp",
                              "oddloop.lp",          "ground_guard.lp"};

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("atom space numbering is a bijection") {
    AtomSpace s(3, {{"p", 1}, {"q", 2}, {"r", 0}});
    CHECK(s.size() == 3 + 9 + 1);
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto [pid, tuple] = s.decode(k);
        CHECK(s.index(pid, tuple) == k);
    }
    CHECK(s.atom_name(4, element_names(3)) == "q(e0,e1)");
}

TEST_CASE("evaluation agrees with the reference evaluator") {
    Formula f = parse_formula("forall X (p(X) -> exists Y (q(X,Y) & not p(Y))) | c = d");
    for_each_structure({{"p", 1}, {"q", 2}}, {"c", "d"}, 2, [&](const Interpretation& i) {
        CHECK(eval(f, i) == ref_holds(f, i));
    });
}

TEST_CASE("stability check agrees with the reference checker") {
    for (const char* name : kSmallCorpus) {
        CAPTURE(name);
        Formula f = fol_representation(corpus_program({name}));
        Signature sig = signature_of(f);
        for (int n = 1; n <= 2; ++n)
            for_each_structure(sig.predicates(), sig.object_constants(), n, [&](const Interpretation& i) {
                CHECK(check_sm(f, i) == ref_check_sm(f, i));
            });
    }
}

TEST_CASE("three formulations of stability coincide") {
    for (const char* name : kSmallCorpus) {
        CAPTURE(name);
        Formula f = fol_representation(corpus_program({name}));
        Signature sig = signature_of(f);
        for (int n = 1; n <= 2; ++n)
            for_each_structure(sig.predicates(), sig.object_constants(), n, [&](const Interpretation& i) {
                bool sm = check_sm(f, i);
                CHECK(check_sm_nses(f, i) == sm);
                CHECK(check_sm_ext_loop(f, i) == sm);
            });
    }
}

TEST_CASE("intensional subsets leave the other predicates fixed") {
    Formula f = parse_formula("forall X (e(X) -> p(X))");
    Interpretation i = parse_interpretation("universe a. pred e/1 = { (a) }. pred p/1 = { (a) }.");
    CHECK(check_sm(f, i, std::vector<Symbol>{{"p", 1}}));
    CHECK_FALSE(check_sm(f, i));  // e is minimized away when intensional
    CHECK(ref_check_sm(f, i, {{"p", 1}}));
}

TEST_CASE("star and nses evaluations") {
    Formula f = parse_formula("p(a) -> q(a)");
    Interpretation i = parse_interpretation("universe a. const a = a. pred p/1 = { (a) }. pred q/1 = { (a) }.");
    SecondOrderAssignment u{{"p", {{0}}}, {"q", {}}};
    CHECK_FALSE(eval_star(f, i, {{"p", 1}, {"q", 1}}, u));
    SecondOrderAssignment w{{"p", {}}, {"q", {}}};
    CHECK(eval_star(f, i, {{"p", 1}, {"q", 1}}, w));
    CHECK(nses_eval(parse_formula("q(a)"), i, {{"q", 1}}, {{"q", {}}}));
    CHECK_FALSE(nses_eval(parse_formula("q(a)"), i, {{"q", 1}}, {{"q", {{0}}}}));
}

TEST_CASE("budget is enforced before searching") {
    Formula f = parse_formula("forall X (p(X))");
    Interpretation i(element_names(3));
    i.declare_predicate("p", 1);
    for (int e = 0; e < 3; ++e) i.set_atom("p", {e});
    OracleOptions tiny;
    tiny.budget = 4;
    CHECK_THROWS_AS(check_sm(f, i, std::nullopt, tiny), Error);
    CHECK(check_sm(f, i));
}

TEST_CASE("loops with respect to a structure") {
    Formula f = fol_representation(corpus_program({"pq_cycle.lp"}));
    Interpretation i = parse_interpretation("universe e0. pred p/1 = { (e0) }. pred q/1 = { (e0) }. pred r/1 = {}.");
    auto lu = loops_and_unbounded_wrt(f, i);
    CHECK(lu.exhaustive);
    CHECK(lu.loops.size() == 4);
    CHECK(lu.unbounded.empty());
}

TEST_CASE("loop predicates agree with the graph classification") {
    for (const char* name : {"pq_cycle.lp", "cross_support.lp", "choice.lp", "doubleneg.lp"}) {
        CAPTURE(name);
        Formula f = fol_representation(corpus_program({name}));
        Signature sig = signature_of(f);
        for (int n = 1; n <= 2; ++n)
            for_each_structure(sig.predicates(), sig.object_constants(), n, [&](const Interpretation& i) {
                WrtGraph g = wrt_graph(f, i);
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.space.size()); ++m) {
                    AtomMask q(g.space.size());
                    for (std::size_t k = 0; k < q.size(); ++k) q[k] = m >> k & 1;
                    auto lp = loop_predicate_eval(f, i, q);
                    CHECK(lp.nonempty == (m != 0));
                    CHECK(lp.is_loop == graph_is_loop(g, q));
                    CHECK(lp.is_unbounded == graph_is_unbounded(g, q));
                    CHECK(lp.is_ext_loop == (lp.is_loop || lp.is_unbounded));
                }
            });
    }
}

TEST_CASE("without the equational theory, normal form decides which loop formulas suffice") {
    // one element naming both constants
    Interpretation i = parse_interpretation(
        "universe e. const a = e. const b = e. pred p/1 = { (e) }. pred q/1 = { (e) }.");
    Formula normal = fol_representation(corpus_program({"equality_guard.lp"}));
    Formula other = fol_representation(corpus_program({"ground_guard.lp"}));
    CHECK(eval(normal, i));
    CHECK_FALSE(check_sm(normal, i));
    CHECK_FALSE(eval(loop_formula(normal, {parse_formula("p(b)"), parse_formula("q(a)")}), i));
    CHECK_FALSE(check_sm(other, i));
    for (const char* y : {"p(Z)", "q(Z)"}) CHECK(eval(loop_formula(other, {parse_formula(y)}), i));
}

}  // TEST_SUITE
