#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sloop/syntax.hpp"

namespace sloop {

struct CommandOptions {
    bool formula_input = false;  // input is one sentence rather than a program
    bool simplify = false;
    bool assume_bounded = false;
    bool herbrand = false;
    std::optional<int> universe_size;
    std::optional<std::vector<Symbol>> intensional;
    std::optional<std::string> prover_cmd;
    int timeout = 60;
    std::string format = "text";  // text | json
    std::optional<int> depth;
    std::optional<std::string> flavor;
    std::string pipeline = "auto";  // auto | bounded | semi-safe | slf
    std::vector<std::string> queries;
    std::uint64_t budget = std::uint64_t{1} << 22;
    std::uint64_t max_structures = 1000000;
};

struct CommandResult {
    std::string output;
    int exit_code = 0;  // 0 success, 1 negative verdict
};

// Commands: analyze, loopformulas, completion, tptp, models, entail.
// Throws sloop::Error on bad input; callers map that to exit code 2.
CommandResult run_command(const std::string& command, const std::string& input, const CommandOptions& opts);

const std::vector<std::string>& command_names();

// "p/1,q/2" (spaces allowed).
std::vector<Symbol> parse_predicate_list(const std::string& text);

}  // namespace sloop
