#pragma once

#include <set>
#include <string>
#include <vector>

#include "sloop/syntax.hpp"

namespace sloop {

// Implication G -> H for a rule (facts yield H, constraints G -> ⊥), not closed.
Formula rule_formula(const Rule& r);
Formula fol_representation(const Program& program);

bool is_rectified(const Formula& f);
Formula rectify(const Formula& f);
// Renames bound variables whose names are in `avoid`.
Formula rename_bound_apart(const Formula& f, const std::set<std::string>& avoid);
// Renames every variable of the rule that is in `avoid`.
Rule rename_rule_apart(const Rule& r, const std::set<std::string>& avoid);
std::set<std::string> rule_vars(const Rule& r);

bool is_normal_form(const Program& program);
bool is_normal_form(const Formula& f);
Program normalize(const Program& program);

Formula clark_normal_form(const Program& program);
Formula completion(const Formula& cnf);

Formula extensional_transform(const Formula& f, const std::vector<Symbol>& p);

Formula ground_formula(const Formula& f, const std::vector<std::string>& constants);

// Conjuncts of a left- or right-nested conjunction.
std::vector<Formula> flatten_conjunction(const Formula& f);

}  // namespace sloop
