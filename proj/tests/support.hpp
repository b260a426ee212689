// Test helpers: structure enumeration and a reference evaluator that walks the
// formula tree directly, independent of the library's compiled evaluator.
#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sloop/interpretation.hpp"
#include "sloop/parser.hpp"
#include "sloop/syntax.hpp"
#include "sloop/transform.hpp"

#ifndef SLOOP_CORPUS_DIR
#define SLOOP_CORPUS_DIR "tests/corpus"
#endif

namespace sloop_test {

using namespace sloop;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus_text(const std::string& name) {
    return read_file(std::string(SLOOP_CORPUS_DIR) + "/" + name);
}

inline Program corpus_program(std::initializer_list<const char*> names) {
    std::string text;
    for (const char* n : names) text += corpus_text(n) + "\n";
    return parse_program(text);
}

inline Formula program_formula(const std::string& text) { return fol_representation(parse_program(text)); }

inline std::vector<std::string> element_names(int n) {
    std::vector<std::string> out;
    for (int k = 0; k < n; ++k) out.push_back("e" + std::to_string(k));
    return out;
}

// Calls fn on every structure with universe e0..e(n-1), every map of the given
// constants and every extension of the given predicates (no functions).
inline void for_each_structure(const std::vector<Symbol>& preds, const std::vector<std::string>& constants, int n,
                               const std::function<void(const Interpretation&)>& fn) {
    Interpretation base(element_names(n));
    std::vector<std::pair<std::string, std::vector<int>>> atoms;
    for (const auto& p : preds) {
        base.declare_predicate(p.name, p.arity);
        for (std::size_t t = 0; t < base.tuple_count(p.arity); ++t) atoms.emplace_back(p.name, base.tuple_at(p.arity, t));
    }
    if (atoms.size() > 24) throw std::runtime_error("too many ground atoms for exhaustive enumeration");
    std::vector<int> cmap(constants.size(), 0);
    while (true) {
        Interpretation withc = base;
        for (std::size_t c = 0; c < constants.size(); ++c) withc.set_constant(constants[c], cmap[c]);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
            Interpretation i = withc;
            for (std::size_t a = 0; a < atoms.size(); ++a)
                if (mask >> a & 1) i.set_atom(atoms[a].first, atoms[a].second);
            fn(i);
        }
        std::size_t d = constants.size();
        while (d > 0 && ++cmap[d - 1] == n) cmap[--d] = 0;
        if (d == 0) break;
    }
}

// ------------------------------------------------------------ reference semantics

using RefEnv = std::map<std::string, int>;

inline int ref_term(const Term& t, const Interpretation& i, const RefEnv& env) {
    switch (t.kind()) {
    case Term::Kind::Variable: return env.at(t.name());
    case Term::Kind::Name: return t.element();
    case Term::Kind::Function: {
        if (t.args().empty()) {
            auto c = i.constant(t.name());
            if (!c) throw std::runtime_error("constant " + t.name() + " not interpreted");
            return *c;
        }
        std::vector<int> args;
        for (const auto& a : t.args()) args.push_back(ref_term(a, i, env));
        return i.apply_function(t.name(), args);
    }
    }
    return -1;
}

// Atoms whose predicate is in `star` read `u` instead of `i` when u is given;
// implications then follow the F* clause (F* -> G*) & (F -> G).
struct RefEval {
    const Interpretation& i;
    const Interpretation* u = nullptr;
    std::set<std::string> star;

    bool atom(const Formula& f, const RefEnv& env, bool use_u) const {
        std::vector<int> tuple;
        for (const auto& a : f.args()) tuple.push_back(ref_term(a, i, env));
        if (use_u && u && star.count(f.pred())) return u->holds(f.pred(), tuple);
        return i.holds(f.pred(), tuple);
    }

    bool eval(const Formula& f, RefEnv& env, bool use_u) const {
        switch (f.kind()) {
        case FormulaKind::Atom: return atom(f, env, use_u);
        case FormulaKind::Equal: return ref_term(f.lhs(), i, env) == ref_term(f.rhs(), i, env);
        case FormulaKind::Bottom: return false;
        case FormulaKind::And: return eval(f.left(), env, use_u) && eval(f.right(), env, use_u);
        case FormulaKind::Or: return eval(f.left(), env, use_u) || eval(f.right(), env, use_u);
        case FormulaKind::Implies: {
            bool plain = !eval(f.left(), env, false) || eval(f.right(), env, false);
            if (!use_u || !u) return plain;
            return plain && (!eval(f.left(), env, true) || eval(f.right(), env, true));
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            bool all = f.kind() == FormulaKind::Forall;
            auto saved = env.find(f.var()) == env.end() ? std::optional<int>() : std::optional<int>(env[f.var()]);
            bool result = all;
            for (int e = 0; e < static_cast<int>(i.size()); ++e) {
                env[f.var()] = e;
                bool v = eval(f.body(), env, use_u);
                if (all && !v) { result = false; break; }
                if (!all && v) { result = true; break; }
            }
            if (saved) env[f.var()] = *saved; else env.erase(f.var());
            return result;
        }
        }
        return false;
    }
};

inline bool ref_holds(const Formula& f, const Interpretation& i, RefEnv env = {}) {
    RefEval r{i};
    return r.eval(f, env, false);
}

inline std::vector<Symbol> formula_predicates(const Formula& f) {
    Signature s = signature_of(f);
    return s.predicates();
}

// SM[F; p] by brute force: I |= F and no proper sub-interpretation u of p satisfies F*(u).
inline bool ref_check_sm(const Formula& f, const Interpretation& i, std::vector<Symbol> p = {}) {
    if (p.empty()) p = formula_predicates(f);
    if (!ref_holds(f, i)) return false;
    std::vector<std::pair<std::string, std::vector<int>>> true_atoms;
    std::set<std::string> names;
    for (const auto& s : p) {
        names.insert(s.name);
        for (std::size_t t = 0; t < i.tuple_count(s.arity); ++t) {
            auto tuple = i.tuple_at(s.arity, t);
            if (i.holds(s.name, tuple)) true_atoms.emplace_back(s.name, tuple);
        }
    }
    std::uint64_t full = (std::uint64_t{1} << true_atoms.size()) - 1;
    for (std::uint64_t m = 0; m < full; ++m) {
        Interpretation u(i.universe());
        for (const auto& s : p) u.declare_predicate(s.name, s.arity);
        for (std::size_t a = 0; a < true_atoms.size(); ++a)
            if (m >> a & 1) u.set_atom(true_atoms[a].first, true_atoms[a].second);
        RefEval r{i, &u, names};
        RefEnv env;
        if (r.eval(f, env, true)) return false;
    }
    return true;
}

// Ground atoms of `preds` true in i, as atoms over object names.
inline std::vector<Formula> true_ground_atoms(const Interpretation& i, const std::vector<Symbol>& preds) {
    std::vector<Formula> out;
    for (const auto& s : preds)
        for (std::size_t t = 0; t < i.tuple_count(s.arity); ++t) {
            auto tuple = i.tuple_at(s.arity, t);
            if (!i.holds(s.name, tuple)) continue;
            std::vector<Term> args;
            for (int e : tuple) args.push_back(Term::object_name(e));
            out.push_back(Formula::atom(s.name, args));
        }
    return out;
}

}  // namespace sloop_test
