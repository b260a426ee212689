#include "sloop/syntax.hpp"

#include <algorithm>
#include <functional>

namespace sloop {

Term Term::var(std::string name) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::fn(std::string name, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::Function;
    t.name_ = std::move(name);
    t.args_ = std::move(args);
    return t;
}

Term Term::object_name(int element) {
    Term t;
    t.kind_ = Kind::Name;
    t.element_ = element;
    return t;
}

bool Term::operator==(const Term& o) const {
    return kind_ == o.kind_ && name_ == o.name_ && element_ == o.element_ && args_ == o.args_;
}

std::strong_ordering Term::operator<=>(const Term& o) const {
    if (auto c = kind_ <=> o.kind_; c != 0) return c;
    if (auto c = name_ <=> o.name_; c != 0) return c;
    if (auto c = element_ <=> o.element_; c != 0) return c;
    if (auto c = args_.size() <=> o.args_.size(); c != 0) return c;
    for (std::size_t i = 0; i < args_.size(); ++i)
        if (auto c = args_[i] <=> o.args_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

struct Formula::Node {
    FormulaKind kind = FormulaKind::Bottom;
    std::string name;  // predicate or bound variable
    std::vector<Term> args;  // atom arguments, or {lhs, rhs}
    Formula left;
    Formula right;

    // The ⊥ node itself must not default-construct ⊥ children.
    explicit Node(FormulaKind k) : kind(k), left(std::shared_ptr<const Node>()), right(std::shared_ptr<const Node>()) {}
};

namespace {
const std::shared_ptr<const Formula::Node>& bottom_node();
}

Formula::Formula() : node_(bottom_node()) {}

namespace {
const std::shared_ptr<const Formula::Node>& bottom_node() {
    static const std::shared_ptr<const Formula::Node> n =
        std::make_shared<const Formula::Node>(FormulaKind::Bottom);
    return n;
}
}  // namespace

Formula Formula::atom(std::string pred, std::vector<Term> args) {
    auto n = std::make_shared<Node>(FormulaKind::Atom);
    n->name = std::move(pred);
    n->args = std::move(args);
    return Formula(std::move(n));
}

Formula Formula::equal(Term lhs, Term rhs) {
    auto n = std::make_shared<Node>(FormulaKind::Equal);
    n->args = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::bottom() { return Formula(bottom_node()); }

Formula Formula::top() { return implies(bottom(), bottom()); }

Formula Formula::conj(Formula l, Formula r) {
    auto n = std::make_shared<Node>(FormulaKind::And);
    n->left = std::move(l);
    n->right = std::move(r);
    return Formula(std::move(n));
}

Formula Formula::disj(Formula l, Formula r) {
    auto n = std::make_shared<Node>(FormulaKind::Or);
    n->left = std::move(l);
    n->right = std::move(r);
    return Formula(std::move(n));
}

Formula Formula::implies(Formula l, Formula r) {
    auto n = std::make_shared<Node>(FormulaKind::Implies);
    n->left = std::move(l);
    n->right = std::move(r);
    return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
    auto n = std::make_shared<Node>(FormulaKind::Forall);
    n->name = std::move(var);
    n->left = std::move(body);
    return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
    auto n = std::make_shared<Node>(FormulaKind::Exists);
    n->name = std::move(var);
    n->left = std::move(body);
    return Formula(std::move(n));
}

Formula Formula::forall(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
    return body;
}

Formula Formula::exists(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

FormulaKind Formula::kind() const { return node_->kind; }

bool Formula::is_negation() const { return kind() == FormulaKind::Implies && right().is_bottom(); }

bool Formula::is_top() const { return is_negation() && left().is_bottom(); }

const std::string& Formula::pred() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Term& Formula::lhs() const { return node_->args.at(0); }
const Term& Formula::rhs() const { return node_->args.at(1); }
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }
const std::string& Formula::var() const { return node_->name; }
const Formula& Formula::body() const { return node_->left; }

bool Formula::operator==(const Formula& o) const { return compare(*this, o) == 0; }

std::size_t Formula::node_count() const {
    switch (kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return 1;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return 1 + body().node_count();
        default: return 1 + left().node_count() + right().node_count();
    }
}

int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case FormulaKind::Bottom: return 0;
        case FormulaKind::Atom:
        case FormulaKind::Equal: {
            if (a.node_->name != b.node_->name) return a.node_->name < b.node_->name ? -1 : 1;
            auto c = a.args() <=> b.args();
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            if (a.var() != b.var()) return a.var() < b.var() ? -1 : 1;
            return compare(a.body(), b.body());
        default:
            if (int c = compare(a.left(), b.left()); c != 0) return c;
            return compare(a.right(), b.right());
    }
}

// ---------------------------------------------------------------- signature

void Signature::add_predicate(const std::string& name, int arity) {
    for (const auto& s : preds_) {
        if (s.name == name) {
            if (s.arity != arity)
                throw Error(ErrorKind::Signature, "predicate '" + name + "' used with arities " +
                                                      std::to_string(s.arity) + " and " + std::to_string(arity));
            return;
        }
    }
    preds_.push_back({name, arity});
}

void Signature::add_function(const std::string& name, int arity) {
    for (const auto& s : fns_) {
        if (s.name == name) {
            if (s.arity != arity)
                throw Error(ErrorKind::Signature, "function '" + name + "' used with arities " +
                                                      std::to_string(s.arity) + " and " + std::to_string(arity));
            return;
        }
    }
    fns_.push_back({name, arity});
}

void Signature::merge(const Signature& o) {
    for (const auto& s : o.preds_) add_predicate(s.name, s.arity);
    for (const auto& s : o.fns_) add_function(s.name, s.arity);
}

std::optional<int> Signature::predicate_arity(const std::string& name) const {
    for (const auto& s : preds_)
        if (s.name == name) return s.arity;
    return std::nullopt;
}

std::optional<int> Signature::function_arity(const std::string& name) const {
    for (const auto& s : fns_)
        if (s.name == name) return s.arity;
    return std::nullopt;
}

std::vector<std::string> Signature::object_constants() const {
    std::vector<std::string> out;
    for (const auto& s : fns_)
        if (s.arity == 0) out.push_back(s.name);
    return out;
}

bool Signature::has_positive_arity_functions() const {
    return std::any_of(fns_.begin(), fns_.end(), [](const Symbol& s) { return s.arity > 0; });
}

int Signature::max_predicate_arity() const {
    int m = 0;
    for (const auto& s : preds_) m = std::max(m, s.arity);
    return m;
}

void collect_signature(const Term& t, Signature& sig) {
    if (!t.is_fn()) return;
    sig.add_function(t.name(), static_cast<int>(t.args().size()));
    for (const auto& a : t.args()) collect_signature(a, sig);
}

void collect_signature(const Formula& f, Signature& sig) {
    switch (f.kind()) {
        case FormulaKind::Atom:
            sig.add_predicate(f.pred(), static_cast<int>(f.args().size()));
            for (const auto& a : f.args()) collect_signature(a, sig);
            break;
        case FormulaKind::Equal:
            collect_signature(f.lhs(), sig);
            collect_signature(f.rhs(), sig);
            break;
        case FormulaKind::Bottom: break;
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect_signature(f.body(), sig); break;
        default:
            collect_signature(f.left(), sig);
            collect_signature(f.right(), sig);
    }
}

Signature signature_of(const Formula& f) {
    Signature s;
    collect_signature(f, s);
    return s;
}

// ---------------------------------------------------------------- variables

void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (t.is_var()) {
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out);
}

std::vector<std::string> vars_of(const Term& t) {
    std::vector<std::string> out;
    collect_vars(t, out);
    return out;
}

std::vector<std::string> vars_of(const std::vector<Term>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) collect_vars(t, out);
    return out;
}

bool occurs_in(const std::string& var, const Term& t) {
    if (t.is_var()) return t.name() == var;
    for (const auto& a : t.args())
        if (occurs_in(var, a)) return true;
    return false;
}

namespace {
void free_vars_rec(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
    auto add_term = [&](const Term& t) {
        std::vector<std::string> vs;
        collect_vars(t, vs);
        for (const auto& v : vs) {
            if (std::find(bound.begin(), bound.end(), v) != bound.end()) continue;
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
    };
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            for (const auto& a : f.args()) add_term(a);
            break;
        case FormulaKind::Bottom: break;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            bound.push_back(f.var());
            free_vars_rec(f.body(), bound, out);
            bound.pop_back();
            break;
        default:
            free_vars_rec(f.left(), bound, out);
            free_vars_rec(f.right(), bound, out);
    }
}

void all_vars_rec(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            for (const auto& a : f.args())
                for (const auto& v : vars_of(a)) out.insert(v);
            break;
        case FormulaKind::Bottom: break;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            out.insert(f.var());
            all_vars_rec(f.body(), out);
            break;
        default:
            all_vars_rec(f.left(), out);
            all_vars_rec(f.right(), out);
    }
}
}  // namespace

std::vector<std::string> free_vars(const Formula& f) {
    std::vector<std::string> bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

std::set<std::string> all_var_names(const Formula& f) {
    std::set<std::string> out;
    all_vars_rec(f, out);
    return out;
}

Formula universal_closure(const Formula& f) { return Formula::forall(free_vars(f), f); }

std::string NameSupply::fresh() {
    for (;;) {
        std::string n = "_v" + std::to_string(next_++);
        if (used_.insert(n).second) return n;
    }
}

bool is_reserved_name(const std::string& v) { return !v.empty() && v[0] == '_'; }

// ------------------------------------------------------------- substitution

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (t.is_var()) {
        const Term* r = lookup(t.name());
        return r ? *r : t;
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(apply(a));
    return Term::fn(t.name(), std::move(args));
}

std::vector<Term> Substitution::apply(const std::vector<Term>& ts) const {
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(apply(t));
    return out;
}

namespace {
Formula subst_formula(const Formula& f, const std::map<std::string, Term>& m) {
    if (m.empty()) return f;
    switch (f.kind()) {
        case FormulaKind::Atom: return Formula::atom(f.pred(), Substitution(m).apply(f.args()));
        case FormulaKind::Equal: {
            Substitution s(m);
            return Formula::equal(s.apply(f.lhs()), s.apply(f.rhs()));
        }
        case FormulaKind::Bottom: return f;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            std::map<std::string, Term> inner = m;
            inner.erase(f.var());
            std::vector<std::string> fv = free_vars(f.body());
            // Keep only bindings that matter for the body.
            for (auto it = inner.begin(); it != inner.end();) {
                if (std::find(fv.begin(), fv.end(), it->first) == fv.end())
                    it = inner.erase(it);
                else
                    ++it;
            }
            std::string v = f.var();
            Formula body = f.body();
            bool capture = false;
            for (const auto& [k, t] : inner)
                if (occurs_in(v, t)) capture = true;
            if (capture) {
                NameSupply names(all_var_names(f.body()));
                names.reserve(v);
                for (const auto& [k, t] : inner) {
                    names.reserve(k);
                    for (const auto& x : vars_of(t)) names.reserve(x);
                }
                std::string nv = names.fresh();
                body = subst_formula(body, {{v, Term::var(nv)}});
                v = nv;
            }
            Formula nb = subst_formula(body, inner);
            return f.kind() == FormulaKind::Forall ? Formula::forall(v, nb) : Formula::exists(v, nb);
        }
        case FormulaKind::And: return Formula::conj(subst_formula(f.left(), m), subst_formula(f.right(), m));
        case FormulaKind::Or: return Formula::disj(subst_formula(f.left(), m), subst_formula(f.right(), m));
        case FormulaKind::Implies:
            return Formula::implies(subst_formula(f.left(), m), subst_formula(f.right(), m));
    }
    return f;
}
}  // namespace

Formula Substitution::apply(const Formula& f) const { return subst_formula(f, map_); }

Substitution Substitution::then(const Substitution& other) const {
    std::map<std::string, Term> out;
    for (const auto& [v, t] : map_) {
        Term r = other.apply(t);
        if (!(r.is_var() && r.name() == v)) out[v] = r;
    }
    for (const auto& [v, t] : other.map_)
        if (!out.count(v) && !map_.count(v)) out[v] = t;
    return Substitution(std::move(out));
}

// -------------------------------------------------------------------- rules

namespace {
// Every predicate occurrence lies in the antecedent of some implication.
bool negative_rec(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Atom: return false;
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return true;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return negative_rec(f.body());
        case FormulaKind::Implies: return negative_rec(f.right());
        default: return negative_rec(f.left()) && negative_rec(f.right());
    }
}
}  // namespace

bool is_negative(const Formula& f) { return negative_rec(f); }

RuleKind classify_rule(const std::vector<Formula>& head, const std::vector<Formula>& body) {
    bool simple_body = std::all_of(body.begin(), body.end(),
                                   [](const Formula& b) { return b.is_atom() || is_negative(b); });
    bool atom_head = std::all_of(head.begin(), head.end(), [](const Formula& h) { return h.is_atom(); });
    if (!simple_body || !atom_head) return RuleKind::Quantifier;
    return head.size() <= 1 ? RuleKind::Nondisjunctive : RuleKind::Disjunctive;
}

Rule make_rule(std::vector<Formula> head, std::vector<Formula> body) {
    Rule r;
    r.kind = classify_rule(head, body);
    r.head = std::move(head);
    r.body = std::move(body);
    return r;
}

Signature Program::signature() const {
    Signature s;
    for (const auto& r : rules) {
        for (const auto& h : r.head) collect_signature(h, s);
        for (const auto& b : r.body) collect_signature(b, s);
    }
    if (intensional)
        for (const auto& p : *intensional) s.add_predicate(p.name, p.arity);
    for (const auto& p : extensional) s.add_predicate(p.name, p.arity);
    return s;
}

std::vector<Symbol> Program::intensional_predicates() const {
    std::vector<Symbol> base = intensional ? *intensional : signature().predicates();
    std::vector<Symbol> out;
    for (const auto& p : base)
        if (std::find(extensional.begin(), extensional.end(), p) == extensional.end()) out.push_back(p);
    return out;
}

RuleKind Program::kind() const {
    RuleKind k = RuleKind::Nondisjunctive;
    for (const auto& r : rules)
        if (static_cast<int>(r.kind) > static_cast<int>(k)) k = r.kind;
    return k;
}

// -------------------------------------------------------------- alpha-equiv

namespace {
struct AlphaCtx {
    std::vector<std::pair<std::string, std::string>> bound;  // innermost last
    std::map<std::string, std::string> free_ab, free_ba;

    bool var_match(const std::string& a, const std::string& b) {
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
            bool ha = it->first == a, hb = it->second == b;
            if (ha || hb) return ha && hb;
        }
        auto ia = free_ab.find(a);
        auto ib = free_ba.find(b);
        if (ia == free_ab.end() && ib == free_ba.end()) {
            free_ab[a] = b;
            free_ba[b] = a;
            return true;
        }
        return ia != free_ab.end() && ib != free_ba.end() && ia->second == b && ib->second == a;
    }

    bool term(const Term& a, const Term& b) {
        if (a.kind() != b.kind()) return false;
        if (a.is_var()) return var_match(a.name(), b.name());
        if (a.is_name()) return a.element() == b.element();
        if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
            if (!term(a.args()[i], b.args()[i])) return false;
        return true;
    }

    bool formula(const Formula& a, const Formula& b) {
        if (a.kind() != b.kind()) return false;
        switch (a.kind()) {
            case FormulaKind::Bottom: return true;
            case FormulaKind::Atom:
            case FormulaKind::Equal:
                if (a.kind() == FormulaKind::Atom && a.pred() != b.pred()) return false;
                if (a.args().size() != b.args().size()) return false;
                for (std::size_t i = 0; i < a.args().size(); ++i)
                    if (!term(a.args()[i], b.args()[i])) return false;
                return true;
            case FormulaKind::Forall:
            case FormulaKind::Exists: {
                bound.emplace_back(a.var(), b.var());
                bool ok = formula(a.body(), b.body());
                bound.pop_back();
                return ok;
            }
            default: return formula(a.left(), b.left()) && formula(a.right(), b.right());
        }
    }
};
}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
    AlphaCtx ctx;
    return ctx.formula(a, b);
}

// ----------------------------------------------------------------- simplify

Formula simplify(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Bottom: return f;
        case FormulaKind::Equal: return f.lhs() == f.rhs() ? Formula::top() : f;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            Formula b = simplify(f.body());
            if (b.is_top() || b.is_bottom()) return b;
            return f.kind() == FormulaKind::Forall ? Formula::forall(f.var(), b) : Formula::exists(f.var(), b);
        }
        case FormulaKind::And: {
            Formula l = simplify(f.left()), r = simplify(f.right());
            if (l.is_bottom() || r.is_bottom()) return Formula::bottom();
            if (l.is_top()) return r;
            if (r.is_top()) return l;
            return Formula::conj(l, r);
        }
        case FormulaKind::Or: {
            Formula l = simplify(f.left()), r = simplify(f.right());
            if (l.is_top() || r.is_top()) return Formula::top();
            if (l.is_bottom()) return r;
            if (r.is_bottom()) return l;
            return Formula::disj(l, r);
        }
        case FormulaKind::Implies: {
            Formula l = simplify(f.left()), r = simplify(f.right());
            if (l.is_bottom() || r.is_top()) return Formula::top();
            if (l.is_top()) return r;
            return Formula::implies(l, r);
        }
    }
    return f;
}

Formula tuple_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Formula> eqs;
    for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(Formula::equal(a[i], b[i]));
    return Formula::conj_all(eqs);
}

Formula tuple_not_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
    if (a.empty()) return Formula::bottom();
    return Formula::neg(tuple_equal(a, b));
}

}  // namespace sloop
