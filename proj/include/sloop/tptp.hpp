#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sloop/generators.hpp"
#include "sloop/syntax.hpp"

namespace sloop {

struct TptpProblem {
    std::vector<std::pair<std::string, Formula>> axioms;
    std::optional<std::pair<std::string, Formula>> conjecture;
};

// One `fof(name, role, formula).` line per entry. Names and symbols are mangled
// injectively into the TPTP lexicon; open formulas are universally closed.
std::string to_tptp(const TptpProblem& problem);

// Minimal FOF reader for text produced by to_tptp. Symbols keep their TPTP
// spelling, so to_tptp(parse_tptp(t)) == t for emitted text.
TptpProblem parse_tptp(const std::string& text);

// Lower-case identifier in [a-z][A-Za-z0-9_]* derived from s.
std::string tptp_lower_word(const std::string& s);

TptpProblem build_entailment_job(const Program& gamma, const LoopFormulaSet& delta, const Formula& query);

struct ProverVerdict {
    enum Kind { Theorem, CounterSatisfiable, Unknown, Timeout, ToolError };
    Kind kind = ToolError;
    std::string detail;  // SZS status word or failure description
};

std::string to_string(ProverVerdict::Kind k);

// Runs `sh -c` on the template with {file} and {timeout} substituted.
// Never throws on tool failure.
ProverVerdict invoke_prover(const std::string& command_template, const TptpProblem& problem, int timeout_s);

// Maps the first `SZS status <word>` line of prover output.
ProverVerdict parse_szs_status(const std::string& output);

}  // namespace sloop
