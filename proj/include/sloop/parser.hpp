#pragma once

#include <string>
#include <string_view>

#include "sloop/interpretation.hpp"
#include "sloop/syntax.hpp"

namespace sloop {

struct ParseOptions {
    std::string filename = "<input>";
    // Accept generated variable names (_v1, ...), as found in printed output.
    bool allow_reserved = false;
};

Program parse_program(std::string_view text, const ParseOptions& opts = {});
Formula parse_formula(std::string_view text, const ParseOptions& opts = {});
Interpretation parse_interpretation(std::string_view text, const ParseOptions& opts = {});

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Rule& r);
std::string to_string(const Program& p);
std::string to_string(const Interpretation& i);
// p={(a)}, q={(b)}
std::string to_compact_string(const Interpretation& i);

}  // namespace sloop
