#include <doctest.h>

#include <json.hpp>

#include "sloop/commands.hpp"
#include "support.hpp"

using namespace sloop;
using namespace sloop_test;

namespace {

CommandResult run(const std::string& cmd, const std::string& input, CommandOptions o = {}) {
    return run_command(cmd, input, o);
}

std::string insurance(std::initializer_list<const char*> parts) {
    std::string s;
    for (const char* p : parts) s += corpus_text(p) + "\n";
    return s;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("command list") {
    CHECK(command_names() == std::vector<std::string>{"analyze", "loopformulas", "completion", "tptp", "models", "entail"});
    CHECK_THROWS_AS(run("frobnicate", "p."), Error);
}

TEST_CASE("predicate lists") {
    CHECK(parse_predicate_list("p/1, q/2") == std::vector<Symbol>{{"p", 1}, {"q", 2}});
    CHECK_THROWS_AS(parse_predicate_list("p"), Error);
}

TEST_CASE("analyze json is stable and complete") {
    CommandOptions o;
    o.format = "json";
    auto a = run("analyze", corpus_text("insurance_rules.lp"), o);
    auto b = run("analyze", corpus_text("insurance_rules.lp"), o);
    CHECK(a.output == b.output);
    auto j = nlohmann::json::parse(a.output);
    for (const char* key : {"input", "rectified", "normal_form", "tight", "semi_safe", "intensional", "bounded",
                            "atomic_tight", "loop_status", "loops"})
        CHECK(j.contains(key));
    CHECK(j["loops"].size() == 7);
    CHECK(j["bounded"]["value"] == "Yes");
}

TEST_CASE("models command prints the unique answer set") {
    CommandOptions o;
    o.herbrand = true;
    auto r = run("models", corpus_text("default_negation.lp"), o);
    CHECK(r.exit_code == 0);
    CHECK(r.output == "p={(a)}, q={(b)}, r={(a)}\n");
    CommandOptions none;
    none.universe_size = 1;
    CHECK(run("models", "p :- not p.", none).exit_code == 1);
}

TEST_CASE("entail exit codes") {
    CommandOptions o;
    o.universe_size = 2;
    o.queries = {"forall X Y (discount(X,Y) -> X = john)"};
    auto ok = run("entail", insurance({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}), o);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("ConsistentUpTo(2)") != std::string::npos);
    o.queries = {"not exists X (married(X))"};
    auto bad = run("entail", insurance({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}), o);
    CHECK(bad.exit_code == 1);
    o.queries = {"exists X (married(X))"};
    o.prover_cmd = "echo 'SZS status Theorem' {file}";
    auto proved = run("entail", insurance({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}), o);
    CHECK(proved.exit_code == 0);
    CHECK(proved.output.find("Theorem") != std::string::npos);
    o.prover_cmd = "/nonexistent/prover {file}";
    auto broken = run("entail", insurance({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}), o);
    CHECK(broken.exit_code == 2);
}

TEST_CASE("program queries are used when none are given") {
    CommandOptions o;
    o.universe_size = 1;
    auto r = run("entail", "p(a). #query p(a).", o);
    CHECK(r.exit_code == 0);
}

TEST_CASE("loop formula pipelines") {
    auto cycle = run("loopformulas", corpus_text("pq_cycle.lp"));
    CHECK(cycle.output.find("{p(_v1), q(_v1)}") != std::string::npos);
    CommandOptions o;
    o.formula_input = true;
    auto semi = run("loopformulas", corpus_text("semi_safe.fol"), o);
    CHECK(semi.output.find("% spp") != std::string::npos);
    o.pipeline = "bounded";
    CHECK_THROWS_AS(run("loopformulas", corpus_text("semi_safe.fol"), o), Error);
    CommandOptions s;
    s.pipeline = "slf";
    auto slf = run("loopformulas", corpus_text("pq_cycle.lp"), s);
    CHECK(slf.output.find("% {r(") != std::string::npos);
}

TEST_CASE("completion needs a program") {
    CommandOptions o;
    o.formula_input = true;
    CHECK_THROWS_AS(run("completion", "p(a)", o), Error);
    CHECK(run("completion", corpus_text("guarded_fact.lp")).exit_code == 0);
}

TEST_CASE("tptp command") {
    CommandOptions o;
    o.queries = {"exists X (married(X))"};
    auto r = run("tptp", insurance({"insurance_rules.lp", "insurance_man.lp", "insurance_spouse.lp"}), o);
    CHECK(r.output.find("fof(goal, conjecture") != std::string::npos);
    CHECK(r.output.find("fof(rule_1, axiom") != std::string::npos);
}

}  // TEST_SUITE
