#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sloop/analysis.hpp"
#include "sloop/syntax.hpp"

namespace sloop {

enum class Flavor { ES, ESDisjunctive, NES, QES };

std::string to_string(Flavor f);
std::optional<Flavor> parse_flavor(const std::string& s);
// ES for nondisjunctive programs, ES-disj for disjunctive ones, QES for programs with quantifiers.
Flavor default_flavor(const Program& program);

// Support formulas. Program variants normalize (ES kinds) and rename the program apart from y.
Formula es_nondisjunctive(const Program& program, const AtomSet& y);
Formula es_disjunctive(const Program& program, const AtomSet& y);
Formula nes(const Formula& f, const AtomSet& y);
Formula f_sub_y(const Formula& f, const AtomSet& y);
Formula qes(const Program& program, const AtomSet& y);

// Universal closure of (conjunction of y) -> support.
Formula loop_formula(const Program& program, const AtomSet& y, Flavor flavor);
Formula loop_formula(const Formula& f, const AtomSet& y);

struct LabeledFormula {
    std::string label;
    AtomSet loop;  // empty for non-loop axioms
    Formula formula;
};

struct LoopFormulaSet {
    Formula base;
    std::vector<LabeledFormula> formulas;
    // Smaller set built from a finite complete set of loops, when one is known.
    std::vector<LabeledFormula> alternative;
    std::string provenance;
    std::vector<std::string> side_conditions;
};

LoopFormulaSet slf(const Formula& f, const std::optional<std::vector<Symbol>>& p = std::nullopt);
Formula spp_axioms(const Formula& f, const std::optional<std::vector<Symbol>>& p = std::nullopt);
// One loop formula per nonempty predicate subset K of p, over n^arity distinct-variable atoms per predicate.
LoopFormulaSet finite_universe_lf_set(const Formula& f, int n,
                                      const std::optional<std::vector<Symbol>>& p = std::nullopt);

struct PipelineOptions {
    bool assume_bounded = false;
    // Require normal form instead of relying on Clark's equational theory.
    bool normal_form_variant = false;
    std::optional<Flavor> flavor;
    std::optional<int> depth;
};

LoopFormulaSet bounded_pipeline(const Program& program, const PipelineOptions& opts = {});
LoopFormulaSet bounded_pipeline(const Formula& f, const PipelineOptions& opts = {});
LoopFormulaSet semi_safe_pipeline(const Formula& f, const std::optional<std::vector<Symbol>>& p = std::nullopt);
// Same, but complete-loop alternatives use the program's default flavor.
LoopFormulaSet semi_safe_pipeline(const Program& program, const std::optional<std::vector<Symbol>>& p = std::nullopt);

}  // namespace sloop
