#include "compiled.hpp"

#include <algorithm>

namespace sloop::detail {

std::vector<bool> intensional_flags(const AtomSpace& space, const std::vector<Symbol>& p) {
    std::vector<bool> out;
    for (const auto& s : space.predicates()) out.push_back(std::find(p.begin(), p.end(), s) != p.end());
    return out;
}

Compiled::Compiled(const Formula& f, const Interpretation& structure, const AtomSpace& space,
                   const std::vector<bool>& intensional, const std::vector<std::string>& free)
    : space_(&space), structure_(&structure), intensional_(&intensional), n_(space.universe_size()), free_(free) {
    if (static_cast<std::size_t>(n_) != structure.size())
        throw Error(ErrorKind::InvalidArgument, "atom space and structure disagree on the universe size");
    Scope scope;
    for (const auto& v : free_) scope.emplace_back(v, slots_++);
    root_ = compile(f, scope);
}

int Compiled::slot_of(const std::string& free_var) const {
    for (std::size_t i = 0; i < free_.size(); ++i)
        if (free_[i] == free_var) return static_cast<int>(i);
    return -1;
}

CTerm Compiled::compile_term(const Term& t, const Scope& scope) {
    CTerm c;
    switch (t.kind()) {
    case Term::Kind::Variable:
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == t.name()) {
                c.kind = CTerm::Slot;
                c.value = it->second;
                return c;
            }
        throw Error(ErrorKind::InvalidArgument, "variable '" + t.name() + "' is free and has no value");
    case Term::Kind::Name:
        if (t.element() < 0 || t.element() >= n_)
            throw Error(ErrorKind::InvalidArgument, "object name outside the universe");
        c.kind = CTerm::Elem;
        c.value = t.element();
        return c;
    case Term::Kind::Function:
        if (t.args().empty()) {
            auto e = structure_->constant(t.name());
            if (!e) throw Error(ErrorKind::InvalidArgument, "constant '" + t.name() + "' has no denotation");
            c.kind = CTerm::Elem;
            c.value = *e;
            return c;
        }
        {
            auto it = structure_->functions().find(t.name());
            if (it == structure_->functions().end() || it->second.arity != static_cast<int>(t.args().size()))
                throw Error(ErrorKind::InvalidArgument, "function '" + t.name() + "' has no table");
            auto pos = std::find(fn_names_.begin(), fn_names_.end(), t.name());
            if (pos == fn_names_.end()) {
                fn_names_.push_back(t.name());
                fn_tables_.push_back(&it->second.values);
                pos = fn_names_.end() - 1;
            }
            c.kind = CTerm::Fn;
            c.value = static_cast<int>(pos - fn_names_.begin());
            for (const auto& a : t.args()) c.args.push_back(compile_term(a, scope));
            return c;
        }
    }
    return c;
}

int Compiled::compile(const Formula& f, Scope& scope) {
    CNode n;
    n.kind = f.kind();
    switch (f.kind()) {
    case FormulaKind::Atom: {
        auto pid = space_->pred_id(f.pred());
        if (!pid || space_->predicates()[static_cast<std::size_t>(*pid)].arity != static_cast<int>(f.args().size()))
            throw Error(ErrorKind::Signature, "predicate '" + f.pred() + "' is not in the atom space");
        n.pred = *pid;
        n.intensional = (*intensional_)[static_cast<std::size_t>(*pid)];
        for (const auto& a : f.args()) n.args.push_back(compile_term(a, scope));
        break;
    }
    case FormulaKind::Equal:
        n.args.push_back(compile_term(f.lhs(), scope));
        n.args.push_back(compile_term(f.rhs(), scope));
        break;
    case FormulaKind::Bottom:
        break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
        n.left = compile(f.left(), scope);
        n.right = compile(f.right(), scope);
        break;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
        n.slot = slots_++;
        scope.emplace_back(f.var(), n.slot);
        n.left = compile(f.body(), scope);
        scope.pop_back();
        break;
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Compiled::term(const CTerm& t, const std::vector<int>& env) const {
    switch (t.kind) {
    case CTerm::Slot:
        return env[static_cast<std::size_t>(t.value)];
    case CTerm::Elem:
        return t.value;
    case CTerm::Fn: {
        std::size_t idx = 0;
        for (const auto& a : t.args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(term(a, env));
        return (*fn_tables_[static_cast<std::size_t>(t.value)])[idx];
    }
    }
    return 0;
}

std::size_t Compiled::atom_index(const CNode& n, const std::vector<int>& env) const {
    std::size_t idx = 0;
    for (const auto& a : n.args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(term(a, env));
    return space_->offset(n.pred) + idx;
}

bool Compiled::eval(const AtomMask& i, const AtomMask* u, Mode m) const {
    std::vector<int> env(static_cast<std::size_t>(slots_), 0);
    return eval(root_, env, i, u, m);
}

bool Compiled::eval(int id, std::vector<int>& env, const AtomMask& i, const AtomMask* u, Mode m) const {
    const CNode& n = node(id);
    switch (n.kind) {
    case FormulaKind::Atom: {
        std::size_t a = atom_index(n, env);
        if (m == Mode::Plain || !n.intensional) return i[a] != 0;
        if (m == Mode::Star) return (*u)[a] != 0;
        return i[a] != 0 && (*u)[a] == 0;
    }
    case FormulaKind::Equal:
        return term(n.args[0], env) == term(n.args[1], env);
    case FormulaKind::Bottom:
        return false;
    case FormulaKind::And:
        return eval(n.left, env, i, u, m) && eval(n.right, env, i, u, m);
    case FormulaKind::Or:
        return eval(n.left, env, i, u, m) || eval(n.right, env, i, u, m);
    case FormulaKind::Implies:
        if (eval(n.left, env, i, u, m) && !eval(n.right, env, i, u, m)) return false;
        if (m == Mode::Plain) return true;
        return !eval(n.left, env, i, u, Mode::Plain) || eval(n.right, env, i, u, Mode::Plain);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        bool want = n.kind == FormulaKind::Exists;
        auto& slot = env[static_cast<std::size_t>(n.slot)];
        int saved = slot;
        bool result = !want;
        for (int e = 0; e < n_; ++e) {
            slot = e;
            if (eval(n.left, env, i, u, m) == want) {
                result = want;
                break;
            }
        }
        slot = saved;
        return result;
    }
    }
    return false;
}

namespace {
constexpr std::uint8_t F = 0, T = 1, U = 2;
std::uint8_t k_not(std::uint8_t a) { return a == U ? U : static_cast<std::uint8_t>(1 - a); }
std::uint8_t k_and(std::uint8_t a, std::uint8_t b) {
    if (a == F || b == F) return F;
    return (a == T && b == T) ? T : U;
}
std::uint8_t k_or(std::uint8_t a, std::uint8_t b) {
    if (a == T || b == T) return T;
    return (a == F && b == F) ? F : U;
}
}  // namespace

std::uint8_t Compiled::kleene(int id, std::vector<int>& env, const AtomMask& pa, const AtomMask* ub, Mode m) const {
    const CNode& n = node(id);
    switch (n.kind) {
    case FormulaKind::Atom: {
        std::size_t a = atom_index(n, env);
        if (m == Mode::Star && n.intensional && ub && !(*ub)[a]) return F;
        return pa[a];
    }
    case FormulaKind::Equal:
        return term(n.args[0], env) == term(n.args[1], env) ? T : F;
    case FormulaKind::Bottom:
        return F;
    case FormulaKind::And: {
        auto l = kleene(n.left, env, pa, ub, m);
        if (l == F) return F;
        return k_and(l, kleene(n.right, env, pa, ub, m));
    }
    case FormulaKind::Or: {
        auto l = kleene(n.left, env, pa, ub, m);
        if (l == T) return T;
        return k_or(l, kleene(n.right, env, pa, ub, m));
    }
    case FormulaKind::Implies: {
        auto l = kleene(n.left, env, pa, ub, m);
        auto v = l == F ? T : k_or(k_not(l), kleene(n.right, env, pa, ub, m));
        if (m == Mode::Plain || v == F) return v;
        auto pl = kleene(n.left, env, pa, ub, Mode::Plain);
        auto pv = pl == F ? T : k_or(k_not(pl), kleene(n.right, env, pa, ub, Mode::Plain));
        return k_and(v, pv);
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        bool ex = n.kind == FormulaKind::Exists;
        auto& slot = env[static_cast<std::size_t>(n.slot)];
        int saved = slot;
        std::uint8_t acc = ex ? F : T;
        for (int e = 0; e < n_; ++e) {
            slot = e;
            auto v = kleene(n.left, env, pa, ub, m);
            acc = ex ? k_or(acc, v) : k_and(acc, v);
            if (acc == (ex ? T : F)) break;
        }
        slot = saved;
        return acc;
    }
    }
    return F;
}

}  // namespace sloop::detail
