#pragma once

// Formula compiled against a fixed structure (universe, constants, functions) and atom space.

#include <cstdint>
#include <string>
#include <vector>

#include "sloop/oracle.hpp"

namespace sloop::detail {

struct CTerm {
    enum Kind { Slot, Elem, Fn } kind = Elem;
    int value = 0;  // slot, element, or function id
    std::vector<CTerm> args;
};

struct CNode {
    FormulaKind kind = FormulaKind::Bottom;
    int pred = -1;
    bool intensional = false;
    std::vector<CTerm> args;
    int left = -1, right = -1;  // quantifier body in left
    int slot = -1;
};

enum class Mode { Plain, Star, Nses };

class Compiled {
public:
    Compiled(const Formula& f, const Interpretation& structure, const AtomSpace& space,
             const std::vector<bool>& intensional, const std::vector<std::string>& free = {});

    int root() const { return root_; }
    int slots() const { return slots_; }
    int slot_of(const std::string& free_var) const;
    const CNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const AtomSpace& space() const { return *space_; }
    int universe_size() const { return n_; }

    int term(const CTerm& t, const std::vector<int>& env) const;
    std::size_t atom_index(const CNode& n, const std::vector<int>& env) const;

    // Two-valued evaluation. i: atoms true in the structure; u: predicate variables.
    bool eval(int id, std::vector<int>& env, const AtomMask& i, const AtomMask* u, Mode m) const;
    bool eval(const AtomMask& i, const AtomMask* u = nullptr, Mode m = Mode::Plain) const;

    // Kleene evaluation over a partial assignment (0 false, 1 true, 2 unknown).
    // With ub set, Star mode reads an intensional atom a as (a in ub ? pa[a] : false).
    std::uint8_t kleene(int id, std::vector<int>& env, const AtomMask& pa, const AtomMask* ub, Mode m) const;

private:
    using Scope = std::vector<std::pair<std::string, int>>;
    int compile(const Formula& f, Scope& scope);
    CTerm compile_term(const Term& t, const Scope& scope);

    const AtomSpace* space_;
    const Interpretation* structure_;
    const std::vector<bool>* intensional_;
    int n_;
    std::vector<CNode> nodes_;
    std::vector<const std::vector<int>*> fn_tables_;
    std::vector<std::string> fn_names_;
    std::vector<std::string> free_;
    int root_ = -1;
    int slots_ = 0;
};

// intensional[pid] for each predicate of the space.
std::vector<bool> intensional_flags(const AtomSpace& space, const std::vector<Symbol>& p);

}  // namespace sloop::detail
