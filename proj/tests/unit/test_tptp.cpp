#include <doctest.h>

#include <regex>
#include <set>

#include "sloop/generators.hpp"
#include "sloop/parser.hpp"
#include "sloop/tptp.hpp"
#include "sloop/transform.hpp"
#include "support.hpp"

using namespace sloop;
using namespace sloop_test;

namespace {

TptpProblem insurance_job(const char* query) {
    Program prog = corpus_program({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"});
    return build_entailment_job(prog, bounded_pipeline(prog), parse_formula(query));
}

}  // namespace

TEST_SUITE("tptp") {

TEST_CASE("lower words") {
    CHECK(tptp_lower_word("hasWife") == "hasWife");
    CHECK(tptp_lower_word("Man") == "man");
    std::regex word("[a-z][A-Za-z0-9_]*");
    for (const char* s : {"", "9lives", "a-b", "ÄÖ", "__"}) CHECK(std::regex_match(tptp_lower_word(s), word));
}

TEST_CASE("emission uses only the FOF core syntax") {
    TptpProblem p;
    p.axioms.push_back({"ax", parse_formula("forall X Y (p(X) & X != Y -> not q(Y) | #true)")});
    p.conjecture = {"goal", parse_formula("exists X (p(X))")};
    std::string t = to_tptp(p);
    CHECK(t.find("fof(ax, axiom, ") != std::string::npos);
    CHECK(t.find("fof(goal, conjecture, ") != std::string::npos);
    CHECK(t.find("![X,Y]:") != std::string::npos);
    CHECK(t.find("!=") != std::string::npos);
    CHECK(t.find("$true") != std::string::npos);
    CHECK(t.find('~') == std::string::npos);
}

TEST_CASE("round trip through the reader is the identity on emitted text") {
    TptpProblem p;
    p.axioms.push_back({"a1", parse_formula("p(a) & q(b)")});
    p.axioms.push_back({"a2", parse_formula("forall X (X != a -> exists X (r(X) & X = b))")});
    p.axioms.push_back({"a3", parse_formula("#true | s(a, f(b))")});
    p.axioms.push_back({"a4", parse_formula("p(X)")});  // open: closed on output
    p.conjecture = {"goal", parse_formula("exists X (p(X))")};
    std::string t = to_tptp(p);
    CHECK(to_tptp(parse_tptp(t)) == t);
    std::string job = to_tptp(insurance_job("forall X Y (discount(X,Y) -> X = john)"));
    CHECK(to_tptp(parse_tptp(job)) == job);
}

TEST_CASE("symbol mangling is injective") {
    TptpProblem p;
    Term a = Term::constant("a"), b = Term::constant("b");
    Formula f = Formula::conj_all({Formula::atom("p", {a}), Formula::atom("P", {a}), Formula::atom("p", {a, b}),
                                   Formula::atom("p_2", {a})});
    p.axioms.push_back({"a", f});
    std::string t = to_tptp(p);
    std::regex atom("([a-z][A-Za-z0-9_]*)\\(");
    std::set<std::string> names;
    for (auto it = std::sregex_iterator(t.begin(), t.end(), atom); it != std::sregex_iterator(); ++it)
        names.insert((*it)[1]);
    names.erase("fof");
    CHECK(names.size() == 4);
}

TEST_CASE("entailment job layout") {
    TptpProblem job = insurance_job("exists X (married(X))");
    int rules = 0, loops = 0;
    for (const auto& [name, f] : job.axioms) {
        if (name.rfind("rule_", 0) == 0) ++rules;
        if (name.rfind("lf_", 0) == 0) ++loops;
    }
    CHECK(rules == 6);
    CHECK(loops == 7);
    REQUIRE(job.conjecture);
    CHECK(job.conjecture->first == "goal");
}

TEST_CASE("SZS status mapping") {
    CHECK(parse_szs_status("% SZS status Theorem for x\n").kind == ProverVerdict::Theorem);
    CHECK(parse_szs_status("SZS status Unsatisfiable").kind == ProverVerdict::Theorem);
    CHECK(parse_szs_status("# SZS status CounterSatisfiable").kind == ProverVerdict::CounterSatisfiable);
    CHECK(parse_szs_status("SZS status Satisfiable").kind == ProverVerdict::CounterSatisfiable);
    CHECK(parse_szs_status("SZS status Timeout").kind == ProverVerdict::Timeout);
    CHECK(parse_szs_status("SZS status ResourceOut").kind == ProverVerdict::Timeout);
    CHECK(parse_szs_status("SZS status GaveUp").kind == ProverVerdict::Unknown);
    CHECK(parse_szs_status("no status here").kind == ProverVerdict::ToolError);
    auto first = parse_szs_status("SZS status Theorem\nSZS status CounterSatisfiable\n");
    CHECK(first.kind == ProverVerdict::Theorem);
    CHECK(first.detail == "Theorem");
}

TEST_CASE("prover invocation") {
    TptpProblem job = insurance_job("exists X (married(X))");
    auto ok = invoke_prover("grep -q 'fof(goal, conjecture' {file} && echo 'SZS status Theorem'", job, 5);
    CHECK(ok.kind == ProverVerdict::Theorem);
    auto tmo = invoke_prover("echo {timeout}; echo 'SZS status CounterSatisfiable'", job, 7);
    CHECK(tmo.kind == ProverVerdict::CounterSatisfiable);
    auto missing = invoke_prover("/nonexistent/prover {file}", job, 5);
    CHECK(missing.kind == ProverVerdict::ToolError);
    auto silent = invoke_prover("true {file}", job, 5);
    CHECK(silent.kind == ProverVerdict::ToolError);
}

TEST_CASE("a hung prover is killed after the deadline") {
    TptpProblem job = insurance_job("exists X (married(X))");
    auto v = invoke_prover("sleep 60; true {file}", job, 1);
    CHECK(v.kind == ProverVerdict::Timeout);
}

}  // TEST_SUITE
