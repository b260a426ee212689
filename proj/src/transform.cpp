#include "sloop/transform.hpp"

#include <algorithm>
#include <map>

namespace sloop {

Formula rule_formula(const Rule& r) {
    if (r.body.empty()) return r.head_formula();
    return Formula::implies(r.body_formula(), r.head_formula());
}

Formula fol_representation(const Program& program) {
    program.signature();  // arity consistency
    std::vector<Formula> parts;
    for (const auto& r : program.rules) parts.push_back(universal_closure(rule_formula(r)));
    return Formula::conj_all(parts);
}

// ------------------------------------------------------------------ rectify

namespace {
void binders(const Formula& f, std::vector<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            out.push_back(f.var());
            binders(f.body(), out);
            return;
        default:
            binders(f.left(), out);
            binders(f.right(), out);
    }
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& env) {
    if (t.is_var()) {
        auto it = env.find(t.name());
        return it == env.end() ? t : Term::var(it->second);
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(rename_term(a, env));
    return Term::fn(t.name(), std::move(args));
}

template <class Pick>
Formula rename_binders(const Formula& f, std::map<std::string, std::string> env, Pick& pick) {
    switch (f.kind()) {
        case FormulaKind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(rename_term(a, env));
            return Formula::atom(f.pred(), std::move(args));
        }
        case FormulaKind::Equal: return Formula::equal(rename_term(f.lhs(), env), rename_term(f.rhs(), env));
        case FormulaKind::Bottom: return f;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            std::string nv = pick(f.var());
            env[f.var()] = nv;
            Formula b = rename_binders(f.body(), env, pick);
            return f.kind() == FormulaKind::Forall ? Formula::forall(nv, b) : Formula::exists(nv, b);
        }
        case FormulaKind::And:
            return Formula::conj(rename_binders(f.left(), env, pick), rename_binders(f.right(), env, pick));
        case FormulaKind::Or:
            return Formula::disj(rename_binders(f.left(), env, pick), rename_binders(f.right(), env, pick));
        case FormulaKind::Implies:
            return Formula::implies(rename_binders(f.left(), env, pick), rename_binders(f.right(), env, pick));
    }
    return f;
}
}  // namespace

bool is_rectified(const Formula& f) {
    std::vector<std::string> bs;
    binders(f, bs);
    std::set<std::string> seen;
    for (const auto& b : bs)
        if (!seen.insert(b).second) return false;
    for (const auto& v : free_vars(f))
        if (seen.count(v)) return false;
    return true;
}

Formula rectify(const Formula& f) {
    if (is_rectified(f)) return f;
    NameSupply names(all_var_names(f));
    auto pick = [&](const std::string&) { return names.fresh(); };
    return rename_binders(f, {}, pick);
}

Formula rename_bound_apart(const Formula& f, const std::set<std::string>& avoid) {
    NameSupply names(all_var_names(f));
    names.reserve_all(avoid);
    auto pick = [&](const std::string& v) { return avoid.count(v) ? names.fresh() : v; };
    return rename_binders(f, {}, pick);
}

std::set<std::string> rule_vars(const Rule& r) {
    std::set<std::string> out;
    for (const auto& h : r.head)
        for (const auto& v : all_var_names(h)) out.insert(v);
    for (const auto& b : r.body)
        for (const auto& v : all_var_names(b)) out.insert(v);
    return out;
}

Rule rename_rule_apart(const Rule& r, const std::set<std::string>& avoid) {
    std::set<std::string> used = rule_vars(r);
    NameSupply names(used);
    names.reserve_all(avoid);
    std::map<std::string, Term> m;
    for (const auto& v : used)
        if (avoid.count(v)) m[v] = Term::var(names.fresh());
    std::set<std::string> bound_avoid = avoid;
    for (const auto& [k, t] : m) bound_avoid.insert(t.name());
    Substitution s(m);
    Rule out = r;
    for (auto& h : out.head) h = s.apply(rename_bound_apart(h, bound_avoid));
    for (auto& b : out.body) b = s.apply(rename_bound_apart(b, bound_avoid));
    return out;
}

// -------------------------------------------------------------- normal form

namespace {
bool distinct_vars(const std::vector<Term>& args) {
    std::set<std::string> seen;
    for (const auto& a : args)
        if (!a.is_var() || !seen.insert(a.name()).second) return false;
    return true;
}

bool sp_atoms_normal(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Atom: return distinct_vars(f.args());
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return true;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return sp_atoms_normal(f.body());
        case FormulaKind::Implies: return sp_atoms_normal(f.right());
        default: return sp_atoms_normal(f.left()) && sp_atoms_normal(f.right());
    }
}

// Replaces argument positions that are not fresh distinct variables.
std::vector<Term> normal_args(const std::vector<Term>& args, NameSupply& names,
                              std::vector<std::pair<std::string, Term>>& eqs) {
    std::set<std::string> seen;
    std::vector<Term> out;
    for (const auto& a : args) {
        if (a.is_var() && seen.insert(a.name()).second) {
            out.push_back(a);
            continue;
        }
        std::string v = names.fresh();
        eqs.emplace_back(v, a);
        out.push_back(Term::var(v));
    }
    return out;
}

Formula normalize_nested(const Formula& f, NameSupply& names) {
    switch (f.kind()) {
        case FormulaKind::Atom: {
            std::vector<std::pair<std::string, Term>> eqs;
            std::vector<Term> args = normal_args(f.args(), names, eqs);
            if (eqs.empty()) return f;
            std::vector<Formula> parts;
            std::vector<std::string> vs;
            for (const auto& [v, t] : eqs) {
                vs.push_back(v);
                parts.push_back(Formula::equal(Term::var(v), t));
            }
            parts.push_back(Formula::atom(f.pred(), args));
            return Formula::exists(vs, Formula::conj_all(parts));
        }
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return f;
        case FormulaKind::Forall: return Formula::forall(f.var(), normalize_nested(f.body(), names));
        case FormulaKind::Exists: return Formula::exists(f.var(), normalize_nested(f.body(), names));
        case FormulaKind::And:
            return Formula::conj(normalize_nested(f.left(), names), normalize_nested(f.right(), names));
        case FormulaKind::Or:
            return Formula::disj(normalize_nested(f.left(), names), normalize_nested(f.right(), names));
        case FormulaKind::Implies: return Formula::implies(f.left(), normalize_nested(f.right(), names));
    }
    return f;
}
}  // namespace

bool is_normal_form(const Formula& f) { return sp_atoms_normal(f); }

bool is_normal_form(const Program& program) {
    for (const auto& r : program.rules)
        for (const auto& h : r.head)
            if (!sp_atoms_normal(h)) return false;
    return true;
}

Program normalize(const Program& program) {
    Program out = program;
    out.rules.clear();
    for (const auto& r : program.rules) {
        NameSupply names(rule_vars(r));
        bool atom_heads = std::all_of(r.head.begin(), r.head.end(), [](const Formula& h) { return h.is_atom(); });
        if (atom_heads) {
            std::vector<std::pair<std::string, Term>> eqs;
            std::vector<Formula> head;
            for (const auto& h : r.head) head.push_back(Formula::atom(h.pred(), normal_args(h.args(), names, eqs)));
            if (eqs.empty()) {
                out.rules.push_back(r);
                continue;
            }
            std::vector<Formula> body;
            for (const auto& [v, t] : eqs) body.push_back(Formula::equal(Term::var(v), t));
            body.insert(body.end(), r.body.begin(), r.body.end());
            out.rules.push_back(make_rule(std::move(head), std::move(body)));
        } else {
            std::vector<Formula> head;
            for (const auto& h : r.head) head.push_back(normalize_nested(h, names));
            out.rules.push_back(make_rule(std::move(head), r.body));
        }
    }
    return out;
}

// ------------------------------------------------------ Clark normal form

Formula clark_normal_form(const Program& program) {
    std::set<std::string> used;
    for (const auto& r : program.rules) {
        if (r.kind != RuleKind::Nondisjunctive)
            throw Error(ErrorKind::InvalidArgument, "Clark normal form requires a nondisjunctive program");
        for (const auto& v : rule_vars(r)) used.insert(v);
    }
    std::vector<Formula> conjuncts;
    Signature sig = program.signature();
    for (const auto& p : sig.predicates()) {
        NameSupply names(used);
        std::vector<std::string> xs;
        std::vector<Term> xts;
        for (int i = 0; i < p.arity; ++i) {
            xs.push_back(names.fresh());
            xts.push_back(Term::var(xs.back()));
        }
        std::vector<Formula> supports;
        for (const auto& r : program.rules) {
            if (r.head.size() != 1 || r.head[0].pred() != p.name) continue;
            std::vector<Formula> parts;
            for (int i = 0; i < p.arity; ++i) parts.push_back(Formula::equal(xts[i], r.head[0].args()[i]));
            parts.insert(parts.end(), r.body.begin(), r.body.end());
            Formula body = Formula::conj_all(parts);
            std::vector<std::string> z = free_vars(Formula::conj(body, r.head[0]));
            z.erase(std::remove_if(z.begin(), z.end(),
                                   [&](const std::string& v) { return std::find(xs.begin(), xs.end(), v) != xs.end(); }),
                    z.end());
            supports.push_back(Formula::exists(z, body));
        }
        conjuncts.push_back(Formula::forall(xs, Formula::implies(Formula::disj_all(supports), Formula::atom(p.name, xts))));
    }
    for (const auto& r : program.rules)
        if (r.head.empty()) conjuncts.push_back(universal_closure(rule_formula(r)));
    return Formula::conj_all(conjuncts);
}

std::vector<Formula> flatten_conjunction(const Formula& f) {
    if (f.kind() != FormulaKind::And) return {f};
    std::vector<Formula> out = flatten_conjunction(f.left());
    for (const auto& g : flatten_conjunction(f.right())) out.push_back(g);
    return out;
}

Formula completion(const Formula& cnf) {
    std::vector<Formula> out;
    for (const auto& c : flatten_conjunction(cnf)) {
        std::vector<std::string> xs;
        Formula body = c;
        while (body.kind() == FormulaKind::Forall) {
            xs.push_back(body.var());
            body = body.body();
        }
        if (body.kind() != FormulaKind::Implies)
            throw Error(ErrorKind::InvalidArgument, "not in Clark normal form: conjunct is not an implication");
        const Formula& head = body.right();
        if (head.is_bottom()) {
            out.push_back(c);
            continue;
        }
        bool ok = head.is_atom() && head.args().size() == xs.size() && distinct_vars(head.args());
        for (std::size_t i = 0; ok && i < xs.size(); ++i) ok = head.args()[i].name() == xs[i];
        if (!ok) throw Error(ErrorKind::InvalidArgument, "not in Clark normal form: head is not p(x) over the quantified variables");
        const Formula& g = body.left();
        out.push_back(Formula::forall(xs, Formula::conj(Formula::implies(head, g), Formula::implies(g, head))));
    }
    return Formula::conj_all(out);
}

// ---------------------------------------------------- extensional transform

namespace {
Formula double_negate(const Formula& f, const std::set<std::string>& keep) {
    switch (f.kind()) {
        case FormulaKind::Atom: return keep.count(f.pred()) ? f : Formula::neg(Formula::neg(f));
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return f;
        case FormulaKind::Forall: return Formula::forall(f.var(), double_negate(f.body(), keep));
        case FormulaKind::Exists: return Formula::exists(f.var(), double_negate(f.body(), keep));
        case FormulaKind::And: return Formula::conj(double_negate(f.left(), keep), double_negate(f.right(), keep));
        case FormulaKind::Or: return Formula::disj(double_negate(f.left(), keep), double_negate(f.right(), keep));
        case FormulaKind::Implies:
            return Formula::implies(double_negate(f.left(), keep), double_negate(f.right(), keep));
    }
    return f;
}
}  // namespace

Formula extensional_transform(const Formula& f, const std::vector<Symbol>& p) {
    Signature sig = signature_of(f);
    std::set<std::string> in_p;
    for (const auto& s : p) in_p.insert(s.name);
    NameSupply names(all_var_names(f));
    auto fresh_atom = [&](const Symbol& s, std::vector<std::string>& xs) {
        std::vector<Term> ts;
        for (int i = 0; i < s.arity; ++i) {
            xs.push_back(names.fresh());
            ts.push_back(Term::var(xs.back()));
        }
        return Formula::atom(s.name, ts);
    };
    std::vector<Formula> parts{double_negate(f, in_p)};
    for (const auto& q : sig.predicates()) {
        if (in_p.count(q.name)) continue;
        std::vector<std::string> xs;
        Formula a = fresh_atom(q, xs);
        parts.push_back(Formula::forall(xs, Formula::disj(a, Formula::neg(a))));
    }
    for (const auto& q : p) {
        if (sig.predicate_arity(q.name)) continue;
        std::vector<std::string> xs;
        Formula a = fresh_atom(q, xs);
        parts.push_back(Formula::forall(xs, Formula::neg(a)));
    }
    return Formula::conj_all(parts);
}

// ---------------------------------------------------------------- grounding

namespace {
Formula ground_rec(const Formula& f, const std::vector<std::string>& constants) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return f;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            std::vector<Formula> parts;
            for (const auto& c : constants) {
                Substitution s;
                s.bind(f.var(), Term::constant(c));
                parts.push_back(ground_rec(s.apply(f.body()), constants));
            }
            return f.kind() == FormulaKind::Forall ? Formula::conj_all(parts) : Formula::disj_all(parts);
        }
        case FormulaKind::And: return Formula::conj(ground_rec(f.left(), constants), ground_rec(f.right(), constants));
        case FormulaKind::Or: return Formula::disj(ground_rec(f.left(), constants), ground_rec(f.right(), constants));
        case FormulaKind::Implies:
            return Formula::implies(ground_rec(f.left(), constants), ground_rec(f.right(), constants));
    }
    return f;
}
}  // namespace

Formula ground_formula(const Formula& f, const std::vector<std::string>& constants) {
    if (constants.empty()) throw Error(ErrorKind::InvalidArgument, "grounding needs at least one constant");
    if (signature_of(f).has_positive_arity_functions())
        throw Error(ErrorKind::Unsupported, "grounding requires a formula without positive-arity functions");
    return ground_rec(f, constants);
}

}  // namespace sloop
