#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sloop/syntax.hpp"

namespace sloop {

struct AtomOccurrence {
    Formula atom;
    int antecedents = 0;  // enclosing implication antecedents
    bool positive = false;
    bool strictly_positive = false;
    bool in_negative = false;  // inside some negative subformula
};

// An implication occurring strictly positively.
struct RuleOccurrence {
    Formula body;
    Formula head;
    std::vector<Formula> head_atoms;  // strictly positive in the consequent
    std::vector<Formula> body_atoms;  // positive in the antecedent, outside its negative subformulas
};

struct OccurrenceTable {
    std::vector<AtomOccurrence> atoms;
    std::vector<RuleOccurrence> rules;
    bool negative = false;
};

OccurrenceTable classify_occurrences(const Formula& f);

struct DependencyPair {
    Formula head;
    Formula body;
    int rule_index = 0;
};

std::vector<DependencyPair> dependency_pairs(const Formula& f);

std::optional<Substitution> unify(const std::vector<Term>& a, const std::vector<Term>& b);
std::optional<Substitution> unify_atoms(const Formula& a, const Formula& b);

using AtomSet = std::vector<Formula>;

// θ over y1's variables with y1θ = y2 as sets.
std::optional<Substitution> subsumes(const AtomSet& y1, const AtomSet& y2);
// Variables renamed to _v1.. in a deterministic traversal, atoms sorted, duplicates removed.
AtomSet canonical_atom_set(const AtomSet& y);
std::vector<std::string> atom_set_vars(const AtomSet& y);
std::string to_string(const AtomSet& y);

enum class LoopStatus { Complete, NoFiniteCompleteSet, PartialDepthBounded };

struct LoopSetResult {
    LoopStatus status = LoopStatus::Complete;
    bool caveat = false;  // completeness inferred by saturation only
    int depth = 0;
    std::vector<AtomSet> loops;
};

std::string to_string(LoopStatus s);

LoopSetResult enumerate_loops(const Formula& f, std::optional<int> depth_bound = std::nullopt);
// Depth-bounded composition of dependency pairs; usable with or without functions.
LoopSetResult loops_by_composition(const Formula& f, int depth_bound);
// Removes loops subsumed by other listed loops.
std::vector<AtomSet> subsumption_reduce(std::vector<AtomSet> loops);

struct Verdict {
    enum Value { Yes, No, Unknown };
    Value value = Unknown;
    std::string reason;
};

std::string to_string(const Verdict& v);

Verdict is_bounded(const Formula& f, bool assume_bounded = false);
Verdict is_atomic_tight(const Formula& f);
bool is_tight(const Formula& f);

std::set<std::string> restricted_vars(const Formula& f, const std::optional<std::vector<std::string>>& p = std::nullopt);
bool is_semi_safe(const Formula& f, const std::optional<std::vector<std::string>>& p = std::nullopt);

// Tarjan; components in reverse topological order.
std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adj);

}  // namespace sloop
