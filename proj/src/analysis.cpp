#include "sloop/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "sloop/parser.hpp"

namespace sloop {

// ------------------------------------------------------------- occurrences

namespace {

void collect_strict_atoms(const Formula& f, std::vector<Formula>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom: out.push_back(f); return;
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return;
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect_strict_atoms(f.body(), out); return;
        case FormulaKind::Implies: collect_strict_atoms(f.right(), out); return;
        default:
            collect_strict_atoms(f.left(), out);
            collect_strict_atoms(f.right(), out);
    }
}

void collect_positive_nonnegative(const Formula& f, int depth, std::vector<Formula>& out) {
    if (is_negative(f)) return;
    switch (f.kind()) {
        case FormulaKind::Atom:
            if (depth % 2 == 0) out.push_back(f);
            return;
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return;
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect_positive_nonnegative(f.body(), depth, out); return;
        case FormulaKind::Implies:
            collect_positive_nonnegative(f.left(), depth + 1, out);
            collect_positive_nonnegative(f.right(), depth, out);
            return;
        default:
            collect_positive_nonnegative(f.left(), depth, out);
            collect_positive_nonnegative(f.right(), depth, out);
    }
}

void collect_rules(const Formula& f, std::vector<RuleOccurrence>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return;
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect_rules(f.body(), out); return;
        case FormulaKind::Implies: {
            RuleOccurrence r;
            r.body = f.left();
            r.head = f.right();
            collect_strict_atoms(f.right(), r.head_atoms);
            collect_positive_nonnegative(f.left(), 0, r.body_atoms);
            out.push_back(std::move(r));
            collect_rules(f.right(), out);
            return;
        }
        default:
            collect_rules(f.left(), out);
            collect_rules(f.right(), out);
    }
}

void collect_occurrences(const Formula& f, int depth, bool in_negative, std::vector<AtomOccurrence>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
            out.push_back({f, depth, depth % 2 == 0, depth == 0, in_negative});
            return;
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return;
        default: break;
    }
    bool neg = in_negative || is_negative(f);
    switch (f.kind()) {
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect_occurrences(f.body(), depth, neg, out); return;
        case FormulaKind::Implies:
            collect_occurrences(f.left(), depth + 1, neg, out);
            collect_occurrences(f.right(), depth, neg, out);
            return;
        default:
            collect_occurrences(f.left(), depth, neg, out);
            collect_occurrences(f.right(), depth, neg, out);
    }
}

}  // namespace

OccurrenceTable classify_occurrences(const Formula& f) {
    OccurrenceTable t;
    collect_occurrences(f, 0, false, t.atoms);
    collect_rules(f, t.rules);
    t.negative = is_negative(f);
    return t;
}

std::vector<DependencyPair> dependency_pairs(const Formula& f) {
    std::vector<RuleOccurrence> rules;
    collect_rules(f, rules);
    std::vector<DependencyPair> out;
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (const auto& h : rules[i].head_atoms)
            for (const auto& b : rules[i].body_atoms) out.push_back({h, b, static_cast<int>(i)});
    return out;
}

// ---------------------------------------------------------------- unify

namespace {
using Bindings = std::map<std::string, Term>;

const Term& walk(const Term& t, const Bindings& s) {
    const Term* cur = &t;
    while (cur->is_var()) {
        auto it = s.find(cur->name());
        if (it == s.end()) break;
        cur = &it->second;
    }
    return *cur;
}

bool occurs(const std::string& v, const Term& t, const Bindings& s) {
    const Term& w = walk(t, s);
    if (w.is_var()) return w.name() == v;
    for (const auto& a : w.args())
        if (occurs(v, a, s)) return true;
    return false;
}

bool unify_terms(const Term& a0, const Term& b0, Bindings& s) {
    Term a = walk(a0, s), b = walk(b0, s);
    if (a.is_var() && b.is_var() && a.name() == b.name()) return true;
    if (a.is_var()) {
        if (occurs(a.name(), b, s)) return false;
        s[a.name()] = b;
        return true;
    }
    if (b.is_var()) {
        if (occurs(b.name(), a, s)) return false;
        s[b.name()] = a;
        return true;
    }
    if (a.kind() != b.kind()) return false;
    if (a.is_name()) return a.element() == b.element();
    if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!unify_terms(a.args()[i], b.args()[i], s)) return false;
    return true;
}

Term resolve(const Term& t, const Bindings& s) {
    const Term& w = walk(t, s);
    if (w.is_var() || w.args().empty()) return w;
    std::vector<Term> args;
    for (const auto& a : w.args()) args.push_back(resolve(a, s));
    return Term::fn(w.name(), std::move(args));
}
}  // namespace

std::optional<Substitution> unify(const std::vector<Term>& a, const std::vector<Term>& b) {
    if (a.size() != b.size()) return std::nullopt;
    Bindings s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!unify_terms(a[i], b[i], s)) return std::nullopt;
    Substitution out;
    for (const auto& [v, t] : s) out.bind(v, resolve(t, s));
    return out;
}

std::optional<Substitution> unify_atoms(const Formula& a, const Formula& b) {
    if (a.pred() != b.pred()) return std::nullopt;
    return unify(a.args(), b.args());
}

// ------------------------------------------------------------- subsumption

namespace {
bool match_term(const Term& pat, const Term& target, const std::set<std::string>& vars, Bindings& s) {
    if (pat.is_var() && vars.count(pat.name())) {
        auto it = s.find(pat.name());
        if (it != s.end()) return it->second == target;
        s[pat.name()] = target;
        return true;
    }
    if (pat.kind() != target.kind()) return false;
    if (pat.is_var()) return pat.name() == target.name();
    if (pat.is_name()) return pat.element() == target.element();
    if (pat.name() != target.name() || pat.args().size() != target.args().size()) return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match_term(pat.args()[i], target.args()[i], vars, s)) return false;
    return true;
}

bool match_atom(const Formula& pat, const Formula& target, const std::set<std::string>& vars, Bindings& s) {
    if (pat.pred() != target.pred() || pat.args().size() != target.args().size()) return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match_term(pat.args()[i], target.args()[i], vars, s)) return false;
    return true;
}
}  // namespace

std::vector<std::string> atom_set_vars(const AtomSet& y) {
    std::vector<std::string> out;
    for (const auto& a : y)
        for (const auto& t : a.args()) collect_vars(t, out);
    return out;
}

std::optional<Substitution> subsumes(const AtomSet& y1, const AtomSet& y2) {
    auto vs = atom_set_vars(y1);
    std::set<std::string> vars(vs.begin(), vs.end());
    std::optional<Substitution> found;
    std::function<void(std::size_t, Bindings&)> go = [&](std::size_t i, Bindings& s) {
        if (found) return;
        if (i == y1.size()) {
            Substitution th(s);
            for (const auto& b : y2) {
                bool covered = false;
                for (const auto& a : y1)
                    if (Formula::atom(a.pred(), th.apply(a.args())) == b) covered = true;
                if (!covered) return;
            }
            found = th;
            return;
        }
        for (const auto& target : y2) {
            Bindings next = s;
            if (match_atom(y1[i], target, vars, next)) go(i + 1, next);
            if (found) return;
        }
    };
    Bindings s;
    go(0, s);
    return found;
}

namespace {
std::string shape_key(const Term& t) {
    if (t.is_var()) return "?";
    if (t.is_name()) return "@" + std::to_string(t.element());
    std::string s = t.name();
    if (!t.args().empty()) {
        s += "(";
        for (const auto& a : t.args()) s += shape_key(a) + ",";
        s += ")";
    }
    return s;
}

std::string shape_key(const Formula& a) {
    std::string s = a.pred() + "(";
    for (const auto& t : a.args()) s += shape_key(t) + ",";
    return s + ")";
}
}  // namespace

AtomSet canonical_atom_set(const AtomSet& y) {
    AtomSet sorted = y;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Formula& a, const Formula& b) { return shape_key(a) < shape_key(b); });
    std::vector<std::string> order = atom_set_vars(sorted);
    std::map<std::string, Term> m;
    for (std::size_t i = 0; i < order.size(); ++i) m[order[i]] = Term::var("_v" + std::to_string(i + 1));
    Substitution s(m);
    AtomSet out;
    for (const auto& a : sorted) out.push_back(Formula::atom(a.pred(), s.apply(a.args())));
    std::sort(out.begin(), out.end(), [](const Formula& a, const Formula& b) { return to_string(a) < to_string(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(const AtomSet& y) {
    std::string s = "{";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? ", " : "") + to_string(y[i]);
    return s + "}";
}

std::vector<AtomSet> subsumption_reduce(std::vector<AtomSet> loops) {
    for (auto& l : loops) l = canonical_atom_set(l);
    std::sort(loops.begin(), loops.end(), [](const AtomSet& a, const AtomSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return to_string(a) < to_string(b);
    });
    loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
    std::vector<AtomSet> kept;
    std::vector<bool> dropped(loops.size(), false);
    for (std::size_t i = 0; i < loops.size(); ++i) {
        for (std::size_t j = 0; j < loops.size() && !dropped[i]; ++j) {
            if (i == j || dropped[j]) continue;
            if (!subsumes(loops[j], loops[i])) continue;
            // Mutual subsumption keeps the earlier one.
            if (subsumes(loops[i], loops[j]) && i < j) continue;
            dropped[i] = true;
        }
    }
    for (std::size_t i = 0; i < loops.size(); ++i)
        if (!dropped[i]) kept.push_back(loops[i]);
    return kept;
}

std::string to_string(LoopStatus s) {
    switch (s) {
        case LoopStatus::Complete: return "Complete";
        case LoopStatus::NoFiniteCompleteSet: return "NoFiniteCompleteSet";
        case LoopStatus::PartialDepthBounded: return "PartialDepthBounded";
    }
    return "?";
}

std::string to_string(const Verdict& v) {
    switch (v.value) {
        case Verdict::Yes: return "Yes";
        case Verdict::No: return "No";
        case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

// -------------------------------------------------------------------- SCC

std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    struct Frame {
        int v;
        std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& fr = call.back();
            int v = fr.v;
            if (fr.next < adj[v].size()) {
                int w = adj[v][fr.next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }
    return comps;
}

// ------------------------------------------------------------- tightness

bool is_tight(const Formula& f) {
    std::vector<std::string> preds;
    Signature sig = signature_of(f);
    for (const auto& s : sig.predicates()) preds.push_back(s.name);
    auto id = [&](const std::string& p) {
        return static_cast<int>(std::find(preds.begin(), preds.end(), p) - preds.begin());
    };
    std::vector<std::vector<int>> adj(preds.size());
    for (const auto& dp : dependency_pairs(f)) {
        int a = id(dp.head.pred()), b = id(dp.body.pred());
        if (a == b) return false;
        adj[a].push_back(b);
    }
    for (const auto& c : strongly_connected_components(adj))
        if (c.size() > 1) return false;
    return true;
}

// --------------------------------------------------------- restricted vars

std::set<std::string> restricted_vars(const Formula& f, const std::optional<std::vector<std::string>>& p) {
    switch (f.kind()) {
        case FormulaKind::Atom: {
            if (p && std::find(p->begin(), p->end(), f.pred()) == p->end()) return {};
            auto vs = vars_of(f.args());
            return {vs.begin(), vs.end()};
        }
        case FormulaKind::Equal: {
            if (f.lhs().is_var() && f.rhs().is_var()) return {};
            auto vs = vars_of(f.args());
            return {vs.begin(), vs.end()};
        }
        case FormulaKind::Bottom:
        case FormulaKind::Implies: return {};
        case FormulaKind::And: {
            auto l = restricted_vars(f.left(), p);
            auto r = restricted_vars(f.right(), p);
            l.insert(r.begin(), r.end());
            return l;
        }
        case FormulaKind::Or: {
            auto l = restricted_vars(f.left(), p);
            auto r = restricted_vars(f.right(), p);
            std::set<std::string> out;
            std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.begin()));
            return out;
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            auto s = restricted_vars(f.body(), p);
            s.erase(f.var());
            return s;
        }
    }
    return {};
}

namespace {
bool semi_safe_rec(const Formula& f, const std::set<std::string>& restricted,
                   const std::optional<std::vector<std::string>>& p) {
    switch (f.kind()) {
        case FormulaKind::Atom:
        case FormulaKind::Equal:
            for (const auto& v : vars_of(f.args()))
                if (!restricted.count(v)) return false;
            return true;
        case FormulaKind::Bottom: return true;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return semi_safe_rec(f.body(), restricted, p);
        case FormulaKind::Implies: {
            auto inner = restricted;
            auto rv = restricted_vars(f.left(), p);
            inner.insert(rv.begin(), rv.end());
            return semi_safe_rec(f.right(), inner, p);
        }
        default: return semi_safe_rec(f.left(), restricted, p) && semi_safe_rec(f.right(), restricted, p);
    }
}
}  // namespace

bool is_semi_safe(const Formula& f, const std::optional<std::vector<std::string>>& p) {
    if (signature_of(f).has_positive_arity_functions())
        throw Error(ErrorKind::Unsupported, "semi-safety is defined only for formulas without positive-arity functions");
    return semi_safe_rec(f, {}, p);
}

}  // namespace sloop
