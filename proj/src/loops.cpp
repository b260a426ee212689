#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>

#include "sloop/analysis.hpp"
#include "sloop/parser.hpp"
#include "sloop/transform.hpp"

namespace sloop {

namespace {

constexpr int kMaxSccForSubsets = 18;
constexpr std::size_t kFrontierCap = 20000;
constexpr int kDefaultDepth = 8;

struct GroundGraph {
    std::vector<Formula> atoms;
    std::map<std::string, int> index;
    std::vector<std::vector<int>> adj;

    int vertex(const Formula& a) {
        auto key = to_string(a);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(atoms.size());
        atoms.push_back(a);
        index.emplace(key, id);
        adj.emplace_back();
        return id;
    }
};

GroundGraph ground_graph(const Formula& f, const std::vector<std::string>& constants) {
    GroundGraph g;
    for (const auto& dp : dependency_pairs(ground_formula(f, constants))) {
        int h = g.vertex(dp.head), b = g.vertex(dp.body);
        if (std::find(g.adj[h].begin(), g.adj[h].end(), b) == g.adj[h].end()) g.adj[h].push_back(b);
    }
    return g;
}

bool mentions(const Term& t, const std::string& c) {
    if (t.is_fn() && t.name() == c) return true;
    for (const auto& a : t.args())
        if (mentions(a, c)) return true;
    return false;
}

bool mentions(const Formula& atom, const std::string& c) {
    for (const auto& t : atom.args())
        if (mentions(t, c)) return true;
    return false;
}

bool induced_strongly_connected(const std::vector<std::vector<int>>& adj, const std::vector<int>& members) {
    std::set<int> in(members.begin(), members.end());
    auto reach = [&](bool forward) {
        std::set<int> seen{members[0]};
        std::vector<int> todo{members[0]};
        while (!todo.empty()) {
            int v = todo.back();
            todo.pop_back();
            if (forward) {
                for (int w : adj[v])
                    if (in.count(w) && seen.insert(w).second) todo.push_back(w);
            } else {
                for (int w : members)
                    if (!seen.count(w) && std::find(adj[w].begin(), adj[w].end(), v) != adj[w].end()) {
                        seen.insert(w);
                        todo.push_back(w);
                    }
            }
        }
        return seen.size() == members.size();
    };
    return reach(true) && reach(false);
}

Term lift(const Term& t, const std::map<std::string, std::string>& fresh) {
    if (t.is_constant()) {
        auto it = fresh.find(t.name());
        if (it != fresh.end()) return Term::var(it->second);
        return t;
    }
    if (!t.is_fn()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(lift(a, fresh));
    return Term::fn(t.name(), std::move(args));
}

std::vector<AtomSet> singleton_loops(const Formula& f) {
    std::vector<AtomSet> out;
    Signature sig = signature_of(f);
    for (const auto& p : sig.predicates()) {
        std::vector<Term> args;
        for (int i = 1; i <= p.arity; ++i) args.push_back(Term::var("_x" + std::to_string(i)));
        out.push_back({Formula::atom(p.name, args)});
    }
    return out;
}

std::vector<std::string> fresh_constants(const std::string& stem, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

bool has_mixed_scc(const Formula& f, const std::vector<std::string>& base) {
    auto c = fresh_constants("_c", 2);
    std::vector<std::string> consts = base;
    consts.insert(consts.end(), c.begin(), c.end());
    GroundGraph g = ground_graph(f, consts);
    for (const auto& comp : strongly_connected_components(g.adj)) {
        if (comp.size() < 2) continue;
        for (const auto& ci : c) {
            bool with = false, without = false;
            for (int v : comp) (mentions(g.atoms[v], ci) ? with : without) = true;
            if (with && without) return true;
        }
    }
    return false;
}

LoopSetResult enumerate_function_free(const Formula& f) {
    LoopSetResult r;
    std::vector<std::string> base = signature_of(f).object_constants();
    if (has_mixed_scc(f, base)) {
        r.status = LoopStatus::NoFiniteCompleteSet;
        return r;
    }
    int n = std::max(1, signature_of(f).max_predicate_arity());
    auto d = fresh_constants("_d", n);
    std::map<std::string, std::string> lifting;
    for (int i = 0; i < n; ++i) lifting[d[static_cast<std::size_t>(i)]] = "_x" + std::to_string(i + 1);
    std::vector<std::string> consts = base;
    consts.insert(consts.end(), d.begin(), d.end());
    GroundGraph g = ground_graph(f, consts);

    std::vector<AtomSet> found = singleton_loops(f);
    for (const auto& comp : strongly_connected_components(g.adj)) {
        if (comp.size() < 2) continue;
        if (static_cast<int>(comp.size()) > kMaxSccForSubsets)
            throw Error(ErrorKind::Budget, "strongly connected component with " + std::to_string(comp.size()) +
                                               " ground atoms is too large for loop enumeration");
        std::uint32_t total = 1u << comp.size();
        for (std::uint32_t mask = 1; mask < total; ++mask) {
            if (__builtin_popcount(mask) < 2) continue;
            std::vector<int> members;
            for (std::size_t i = 0; i < comp.size(); ++i)
                if (mask & (1u << i)) members.push_back(comp[i]);
            if (!induced_strongly_connected(g.adj, members)) continue;
            AtomSet y;
            for (int v : members) y.push_back(Formula::atom(g.atoms[v].pred(), [&] {
                std::vector<Term> args;
                for (const auto& t : g.atoms[v].args()) args.push_back(lift(t, lifting));
                return args;
            }()));
            found.push_back(y);
        }
    }
    r.status = LoopStatus::Complete;
    r.loops = subsumption_reduce(found);
    return r;
}

// A walk a0 -> a1 -> ... -> ak through instances of dependency pairs.
using Walk = std::vector<Formula>;

std::string walk_key(const Walk& w) {
    std::map<std::string, std::string> names;
    std::function<std::string(const Term&)> tk = [&](const Term& t) -> std::string {
        if (t.is_var()) {
            auto it = names.find(t.name());
            if (it == names.end()) it = names.emplace(t.name(), "V" + std::to_string(names.size())).first;
            return it->second;
        }
        std::string s = t.is_name() ? "@" + std::to_string(t.element()) : t.name();
        s += "(";
        for (const auto& a : t.args()) s += tk(a) + ",";
        return s + ")";
    };
    std::string key;
    for (const auto& a : w) {
        key += a.pred() + "(";
        for (const auto& t : a.args()) key += tk(t) + ",";
        key += ");";
    }
    return key;
}

Formula rename_atom(const Formula& a, const std::map<std::string, Term>& m) {
    return Formula::atom(a.pred(), Substitution(m).apply(a.args()));
}

}  // namespace

LoopSetResult loops_by_composition(const Formula& f, int depth_bound) {
    if (depth_bound < 1) throw Error(ErrorKind::InvalidArgument, "depth bound must be positive");
    auto pairs = dependency_pairs(f);
    int counter = 0;
    auto fresh_pair = [&](const DependencyPair& dp) {
        std::vector<std::string> vs;
        for (const auto& t : dp.head.args()) collect_vars(t, vs);
        for (const auto& t : dp.body.args()) collect_vars(t, vs);
        std::map<std::string, Term> m;
        for (const auto& v : vs)
            if (!m.count(v)) m[v] = Term::var("_w" + std::to_string(++counter));
        return std::make_pair(rename_atom(dp.head, m), rename_atom(dp.body, m));
    };

    LoopSetResult r;
    std::vector<AtomSet> found = singleton_loops(f);
    std::vector<AtomSet> previous = subsumption_reduce(found);
    std::vector<Walk> frontier;
    std::set<std::string> seen;
    for (const auto& dp : pairs) {
        auto [h, b] = fresh_pair(dp);
        Walk w{h, b};
        if (seen.insert(walk_key(w)).second) frontier.push_back(w);
    }
    bool capped = false;
    int depth = 1;
    for (; depth <= depth_bound; ++depth) {
        for (const auto& w : frontier) {
            if (auto th = unify_atoms(w.back(), w.front())) {
                AtomSet y;
                for (std::size_t i = 0; i + 1 < w.size(); ++i) y.push_back(rename_atom(w[i], th->map()));
                found.push_back(y);
            }
        }
        auto current = subsumption_reduce(found);
        bool last = depth == depth_bound;
        if (last || frontier.empty()) {
            r.depth = depth;
            r.loops = current;
            if (frontier.empty()) {
                r.status = LoopStatus::Complete;
            } else if (!capped && current == previous) {
                r.status = LoopStatus::Complete;
                r.caveat = true;
            } else {
                r.status = LoopStatus::PartialDepthBounded;
            }
            return r;
        }
        previous = current;
        std::vector<Walk> next;
        for (const auto& w : frontier) {
            for (const auto& dp : pairs) {
                auto [h, b] = fresh_pair(dp);
                auto th = unify_atoms(w.back(), h);
                if (!th) continue;
                Walk nw;
                for (const auto& a : w) nw.push_back(rename_atom(a, th->map()));
                nw.push_back(rename_atom(b, th->map()));
                if (!seen.insert(walk_key(nw)).second) continue;
                if (next.size() >= kFrontierCap) {
                    capped = true;
                    break;
                }
                next.push_back(std::move(nw));
            }
        }
        frontier = std::move(next);
    }
    return r;
}

LoopSetResult enumerate_loops(const Formula& f, std::optional<int> depth_bound) {
    if (signature_of(f).has_positive_arity_functions()) return loops_by_composition(f, depth_bound.value_or(kDefaultDepth));
    return enumerate_function_free(f);
}

Verdict is_bounded(const Formula& f, bool assume_bounded) {
    if (signature_of(f).has_positive_arity_functions()) {
        if (assume_bounded) return {Verdict::Yes, "assumed bounded by the caller"};
        return {Verdict::Unknown,
                "boundedness is undecidable for formulas with function constants of positive arity"};
    }
    auto r = enumerate_function_free(f);
    if (r.status == LoopStatus::Complete) return {Verdict::Yes, ""};
    return {Verdict::No, "no finite complete set of loops"};
}

Verdict is_atomic_tight(const Formula& f) {
    if (signature_of(f).has_positive_arity_functions())
        return {Verdict::Unknown,
                "atomic tightness is undecidable for formulas with function constants of positive arity"};
    if (is_bounded(f).value != Verdict::Yes) return {Verdict::No, "not bounded"};
    auto consts = signature_of(f).object_constants();
    if (consts.empty()) consts.push_back("_c1");
    GroundGraph g = ground_graph(f, consts);
    for (std::size_t v = 0; v < g.adj.size(); ++v)
        for (int w : g.adj[v])
            if (w == static_cast<int>(v)) return {Verdict::No, "ground dependency graph has a cycle"};
    for (const auto& comp : strongly_connected_components(g.adj))
        if (comp.size() > 1) return {Verdict::No, "ground dependency graph has a cycle"};
    return {Verdict::Yes, ""};
}

}  // namespace sloop
