#include <doctest.h>

#include <algorithm>

#include "sloop/analysis.hpp"
#include "sloop/oracle.hpp"
#include "sloop/parser.hpp"
#include "sloop/transform.hpp"
#include "support.hpp"

using namespace sloop;
using namespace sloop_test;

namespace {

Formula corpus_formula(const char* name) { return fol_representation(corpus_program({name})); }

std::vector<std::string> loop_strings(const LoopSetResult& r) {
    std::vector<std::string> out;
    for (const auto& y : r.loops) out.push_back(to_string(canonical_atom_set(y)));
    std::sort(out.begin(), out.end());
    return out;
}

AtomSet atoms(std::initializer_list<const char*> texts) {
    AtomSet out;
    for (const char* t : texts) out.push_back(parse_formula(t));
    return out;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("unification computes most general unifiers") {
    auto s = unify({Term::var("X"), Term::fn("f", {Term::var("Y")})}, {Term::constant("a"), Term::fn("f", {Term::var("X")})});
    REQUIRE(s);
    CHECK(to_string(s->apply(Term::var("Y"))) == "a");
    CHECK_FALSE(unify({Term::var("X")}, {Term::fn("f", {Term::var("X")})}));  // occurs check
    CHECK_FALSE(unify({Term::constant("a")}, {Term::constant("b")}));
    CHECK_FALSE(unify_atoms(parse_formula("p(X)"), parse_formula("q(X)")));
}

TEST_CASE("subsumption maps one atom set onto another") {
    CHECK(subsumes(atoms({"p(X)", "p(Y)"}), atoms({"p(Z)"})));
    CHECK(subsumes(atoms({"p(X)"}), atoms({"p(a)"})));
    CHECK_FALSE(subsumes(atoms({"p(a)"}), atoms({"p(X)"})));
    CHECK_FALSE(subsumes(atoms({"p(X)"}), atoms({"p(Y)", "q(Y)"})));
}

TEST_CASE("canonical atom sets are insensitive to naming and order") {
    CHECK(canonical_atom_set(atoms({"q(B)", "p(B)"})) == canonical_atom_set(atoms({"p(Z)", "q(Z)"})));
    CHECK(to_string(canonical_atom_set(atoms({"q(B)", "p(B)", "p(B)"}))) == "{p(_v1), q(_v1)}");
}

TEST_CASE("strongly connected components come in reverse topological order") {
    std::vector<std::vector<int>> adj{{1}, {0, 2}, {3}, {}};
    auto comps = strongly_connected_components(adj);
    REQUIRE(comps.size() == 3);
    CHECK(comps.front() == std::vector<int>{3});
    auto last = comps.back();
    std::sort(last.begin(), last.end());
    CHECK(last == std::vector<int>{0, 1});
}

TEST_CASE("classification of the reference programs") {
    Formula cycle = corpus_formula("pq_cycle.lp");
    CHECK(is_bounded(cycle).value == Verdict::Yes);
    CHECK(is_atomic_tight(cycle).value == Verdict::No);
    CHECK_FALSE(is_tight(cycle));

    Formula self = corpus_formula("any_self_support.lp");
    CHECK(is_bounded(self).value == Verdict::No);
    CHECK_FALSE(is_semi_safe(self));
    // the override only matters when boundedness is undecidable
    CHECK(is_bounded(self, true).value == Verdict::No);
    Formula fn = parse_formula("forall X (p(X) -> p(f(X)))");
    CHECK(is_bounded(fn).value == Verdict::Unknown);
    CHECK(is_bounded(fn, true).value == Verdict::Yes);

    Formula cross = corpus_formula("cross_support.lp");
    CHECK(is_bounded(cross).value == Verdict::Yes);
    CHECK(is_atomic_tight(cross).value == Verdict::Yes);

    Formula guarded = corpus_formula("guarded_fact.lp");
    CHECK(is_atomic_tight(guarded).value == Verdict::Yes);
    CHECK_FALSE(is_tight(guarded));

    CHECK(is_semi_safe(parse_formula(corpus_text("semi_safe.fol"))));
    CHECK_FALSE(is_semi_safe(corpus_formula("insurance_rules.lp")));
    CHECK_FALSE(is_semi_safe(parse_formula("exists X (p(X))")));
    CHECK(is_tight(corpus_formula("disjunctive_head.lp")));
}

TEST_CASE("restricted variables and semi-safety relative to a predicate list") {
    Formula f = parse_formula("forall X (e(X) -> p(X))");
    CHECK(is_semi_safe(f));
    // only atoms of intensional predicates restrict
    CHECK_FALSE(is_semi_safe(f, std::vector<std::string>{"p"}));
    CHECK(is_semi_safe(f, std::vector<std::string>{"e", "p"}));
}

TEST_CASE("occurrence table finds rules and strictly positive atoms") {
    auto t = classify_occurrences(parse_formula("p(a) & forall X (q(X) & not r(X) -> p(X))"));
    CHECK(t.rules.size() == 1);  // the negation sits in an antecedent
    int strict = 0;
    for (const auto& a : t.atoms) strict += a.strictly_positive;
    CHECK(strict == 2);
    CHECK(is_negative(parse_formula("not p & X = Y")));
    CHECK_FALSE(is_negative(parse_formula("p | not q")));
}

TEST_CASE("complete loop sets of bounded programs") {
    CHECK(loop_strings(enumerate_loops(corpus_formula("pq_cycle.lp"))) ==
          std::vector<std::string>{"{p(_v1), q(_v1)}", "{p(_v1)}", "{q(_v1)}", "{r(_v1)}"});
    CHECK(loop_strings(enumerate_loops(corpus_formula("insurance_rules.lp"))) ==
          std::vector<std::string>{"{accident(_v1,_v2)}", "{discount(_v1,_v2)}", "{hasWife(_v1), married(_v1)}",
                                   "{hasWife(_v1)}", "{man(_v1)}", "{married(_v1)}", "{spouse(_v1,_v2)}"});
    CHECK(loop_strings(enumerate_loops(corpus_formula("ground_guard.lp"))) ==
          std::vector<std::string>{"{p(_v1)}", "{q(_v1)}"});
    auto eq = loop_strings(enumerate_loops(corpus_formula("equality_guard.lp")));
    CHECK(std::find(eq.begin(), eq.end(), "{p(b), q(a)}") != eq.end());
}

TEST_CASE("unbounded programs report no finite complete set") {
    auto r = enumerate_loops(corpus_formula("any_self_support.lp"));
    CHECK(r.status == LoopStatus::NoFiniteCompleteSet);
    auto d = loops_by_composition(corpus_formula("any_self_support.lp"), 3);
    CHECK(d.status == LoopStatus::PartialDepthBounded);
    // {p(X), p(Y), p(Z)} subsumes every shorter cycle
    REQUIRE(d.loops.size() == 1);
    CHECK(d.loops[0].size() == 3);
}

TEST_CASE("subsumption reduction keeps the most general loops") {
    auto kept = subsumption_reduce({atoms({"p(X)"}), atoms({"p(a)"}), atoms({"q(X)"})});
    CHECK(kept.size() == 2);
}

TEST_CASE("dependency pairs follow head-to-body edges") {
    auto pairs = dependency_pairs(rectify(corpus_formula("pq_cycle.lp")));
    std::vector<std::string> seen;
    for (const auto& d : pairs) seen.push_back(d.head.pred() + ">" + d.body.pred());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<std::string>{"p>q", "q>p"});
}

TEST_CASE("static atomic tightness agrees with per-structure acyclicity") {
    for (const char* name : {"default_negation.lp", "cross_support.lp", "guarded_fact.lp", "ground_guard.lp", "choice.lp"}) {
        CAPTURE(name);
        Formula f = corpus_formula(name);
        REQUIRE(is_atomic_tight(f).value == Verdict::Yes);
        Signature sig = signature_of(f);
        for (int n = 1; n <= 2; ++n)
            for_each_structure(sig.predicates(), sig.object_constants(), n, [&](const Interpretation& i) {
                if (!cet_check(i) || !eval(f, i)) return;
                auto lu = loops_and_unbounded_wrt(f, i);
                auto truth = wrt_graph(f, i).space.mask_of(i);
                for (const auto& y : lu.loops) {
                    int size = 0;
                    bool inside = true;
                    for (std::size_t k = 0; k < y.size(); ++k)
                        if (y[k]) {
                            ++size;
                            inside = inside && truth[k];
                        }
                    CHECK_FALSE((inside && size > 1));
                }
            });
    }
}

}  // TEST_SUITE
