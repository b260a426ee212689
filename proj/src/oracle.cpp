#include "sloop/oracle.hpp"

#include <algorithm>

#include "compiled.hpp"
#include "sloop/analysis.hpp"
#include "sloop/transform.hpp"

namespace sloop {

using detail::Compiled;
using detail::Mode;

AtomSpace::AtomSpace(int n, std::vector<Symbol> preds) : n_(n), preds_(std::move(preds)) {
    if (n <= 0) throw Error(ErrorKind::InvalidArgument, "universe must be nonempty");
    for (const auto& p : preds_) {
        offsets_.push_back(total_);
        std::size_t c = 1;
        for (int k = 0; k < p.arity; ++k) {
            c *= static_cast<std::size_t>(n);
            if (c > (std::size_t{1} << 26)) throw Error(ErrorKind::Budget, "atom space too large");
        }
        total_ += c;
    }
}

std::optional<int> AtomSpace::pred_id(const std::string& name) const {
    for (std::size_t i = 0; i < preds_.size(); ++i)
        if (preds_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::size_t AtomSpace::count(int pid) const {
    auto next = static_cast<std::size_t>(pid) + 1 < offsets_.size() ? offsets_[static_cast<std::size_t>(pid) + 1] : total_;
    return next - offset(pid);
}

std::size_t AtomSpace::index(int pid, const std::vector<int>& tuple) const {
    std::size_t idx = 0;
    for (int e : tuple) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(e);
    return offset(pid) + idx;
}

std::pair<int, std::vector<int>> AtomSpace::decode(std::size_t idx) const {
    int pid = 0;
    while (static_cast<std::size_t>(pid) + 1 < offsets_.size() && offsets_[static_cast<std::size_t>(pid) + 1] <= idx) ++pid;
    std::size_t rel = idx - offset(pid);
    int arity = preds_[static_cast<std::size_t>(pid)].arity;
    std::vector<int> t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<std::size_t>(i)] = static_cast<int>(rel % static_cast<std::size_t>(n_));
        rel /= static_cast<std::size_t>(n_);
    }
    return {pid, t};
}

std::string AtomSpace::atom_name(std::size_t idx, const std::vector<std::string>& universe) const {
    auto [pid, t] = decode(idx);
    std::string s = preds_[static_cast<std::size_t>(pid)].name;
    if (t.empty()) return s;
    s += "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += universe[static_cast<std::size_t>(t[i])];
    }
    return s + ")";
}

AtomMask AtomSpace::mask_of(const Interpretation& i) const {
    if (static_cast<int>(i.size()) != n_) throw Error(ErrorKind::InvalidArgument, "universe size mismatch");
    AtomMask m(total_, 0);
    for (std::size_t pid = 0; pid < preds_.size(); ++pid) {
        auto it = i.predicates().find(preds_[pid].name);
        if (it == i.predicates().end()) continue;
        if (it->second.arity != preds_[pid].arity)
            throw Error(ErrorKind::Signature, "predicate '" + preds_[pid].name + "' used with two arities");
        std::copy(it->second.bits.begin(), it->second.bits.end(), m.begin() + static_cast<std::ptrdiff_t>(offsets_[pid]));
    }
    return m;
}

void AtomSpace::store(const AtomMask& m, Interpretation& i) const {
    for (std::size_t pid = 0; pid < preds_.size(); ++pid) {
        i.declare_predicate(preds_[pid].name, preds_[pid].arity);
        auto* table = i.predicate_table(preds_[pid].name);
        std::copy(m.begin() + static_cast<std::ptrdiff_t>(offsets_[pid]),
                  m.begin() + static_cast<std::ptrdiff_t>(offsets_[pid] + count(static_cast<int>(pid))), table->bits.begin());
    }
}

AtomSpace atom_space(const Formula& f, int universe_size, const std::vector<Symbol>& p) {
    Signature sig = signature_of(f);
    std::vector<Symbol> preds = sig.predicates();
    for (const auto& s : p) {
        auto a = sig.predicate_arity(s.name);
        if (a && *a != s.arity) throw Error(ErrorKind::Signature, "predicate '" + s.name + "' used with two arities");
        if (!a) preds.push_back(s);
    }
    return AtomSpace(universe_size, preds);
}

namespace {

std::vector<Symbol> default_p(const Formula& f, const std::optional<std::vector<Symbol>>& p) {
    if (p) return *p;
    Signature sig = signature_of(f);
    return sig.predicates();
}

AtomMask mask_of_assignment(const AtomSpace& space, const SecondOrderAssignment& u) {
    AtomMask m(space.size(), 0);
    for (const auto& [name, tuples] : u) {
        auto pid = space.pred_id(name);
        if (!pid) throw Error(ErrorKind::Signature, "assignment to unknown predicate '" + name + "'");
        for (const auto& t : tuples) {
            if (static_cast<int>(t.size()) != space.predicates()[static_cast<std::size_t>(*pid)].arity)
                throw Error(ErrorKind::Signature, "assignment tuple for '" + name + "' has the wrong arity");
            for (int e : t)
                if (e < 0 || e >= space.universe_size())
                    throw Error(ErrorKind::InvalidArgument, "assignment tuple outside the universe");
            m[space.index(*pid, t)] = 1;
        }
    }
    return m;
}

struct Prepared {
    AtomSpace space;
    std::vector<bool> intensional;
    std::vector<std::string> free;
    std::vector<int> env;
};

Prepared prepare(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p, const Env& env) {
    Prepared r{atom_space(f, static_cast<int>(i.size()), p), {}, {}, {}};
    r.intensional = detail::intensional_flags(r.space, p);
    for (const auto& [v, e] : env) {
        if (e < 0 || static_cast<std::size_t>(e) >= i.size())
            throw Error(ErrorKind::InvalidArgument, "variable '" + v + "' assigned outside the universe");
        r.free.push_back(v);
        r.env.push_back(e);
    }
    return r;
}

bool eval_mode(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p, const SecondOrderAssignment* u,
               const Env& env, Mode m) {
    Prepared pr = prepare(f, i, p, env);
    Compiled c(f, i, pr.space, pr.intensional, pr.free);
    AtomMask im = pr.space.mask_of(i);
    AtomMask um = u ? mask_of_assignment(pr.space, *u) : AtomMask{};
    std::vector<int> slots(static_cast<std::size_t>(c.slots()), 0);
    std::copy(pr.env.begin(), pr.env.end(), slots.begin());
    return c.eval(c.root(), slots, im, u ? &um : nullptr, m);
}

// Indices of intensional atoms true in i.
std::vector<std::size_t> true_intensional(const AtomSpace& space, const std::vector<bool>& intensional, const AtomMask& im) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < im.size(); ++a)
        if (im[a] && intensional[static_cast<std::size_t>(space.decode(a).first)]) out.push_back(a);
    return out;
}

// base^k sub-assignment visits.
void check_budget(std::size_t k, std::uint64_t base, const OracleOptions& opts) {
    if (k >= 40) throw Error(ErrorKind::Budget, "budget exceeded: too many true intensional atoms");
    std::uint64_t states = 1;
    for (std::size_t j = 0; j < k && states <= opts.budget; ++j) states *= base;
    if (states > opts.budget)
        throw Error(ErrorKind::Budget, "budget exceeded: more than " + std::to_string(opts.budget) + " sub-assignments");
}

AtomMask submask(const std::vector<std::size_t>& atoms, std::uint64_t bits, std::size_t size) {
    AtomMask u(size, 0);
    for (std::size_t j = 0; j < atoms.size(); ++j)
        if (bits >> j & 1) u[atoms[j]] = 1;
    return u;
}

// Edge list over bit positions of `atoms`: (head bit, body bit).
std::vector<std::pair<int, int>> local_edges(const WrtGraph& g, const std::vector<std::size_t>& atoms) {
    std::vector<int> pos(g.adj.size(), -1);
    for (std::size_t j = 0; j < atoms.size(); ++j)
        if (atoms[j] < pos.size()) pos[atoms[j]] = static_cast<int>(j);
    std::vector<std::pair<int, int>> out;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (atoms[j] >= g.adj.size()) continue;
        for (int b : g.adj[atoms[j]])
            if (pos[static_cast<std::size_t>(b)] >= 0) out.emplace_back(static_cast<int>(j), pos[static_cast<std::size_t>(b)]);
    }
    return out;
}

bool e_bits(const std::vector<std::pair<int, int>>& edges, std::uint64_t v, std::uint64_t u) {
    for (auto [h, b] : edges)
        if ((v >> h & 1) && (u >> b & 1) && !(v >> b & 1)) return true;
    return false;
}

// Loop(x) for every x over k bits, by quantifying over proper nonempty sub-assignments.
std::vector<std::uint8_t> loop_table(const std::vector<std::pair<int, int>>& edges, std::size_t k) {
    std::vector<std::uint8_t> loop(std::size_t{1} << k, 0);
    for (std::uint64_t x = 1; x < loop.size(); ++x) {
        bool ok = true;
        for (std::uint64_t v = (x - 1) & x; v && ok; v = (v - 1) & x)
            if (!e_bits(edges, v, x)) ok = false;
        loop[x] = ok;
    }
    return loop;
}

bool unbounded_bits(const std::vector<std::pair<int, int>>& edges, const std::vector<std::uint8_t>& loop, std::uint64_t q) {
    if (!q) return false;
    for (std::uint64_t v = q;; v = (v - 1) & q) {
        if (v && loop[v] && !e_bits(edges, v, q)) return false;
        if (!v) break;
    }
    return true;
}

}  // namespace

bool eval(const Formula& f, const Interpretation& i, const Env& env) {
    return eval_mode(f, i, {}, nullptr, env, Mode::Plain);
}

bool eval_star(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p, const SecondOrderAssignment& u,
               const Env& env) {
    return eval_mode(f, i, p, &u, env, Mode::Star);
}

bool nses_eval(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p, const SecondOrderAssignment& u,
               const Env& env) {
    return eval_mode(f, i, p, &u, env, Mode::Nses);
}

bool check_sm(const Formula& f, const Interpretation& i, const std::optional<std::vector<Symbol>>& p,
              const OracleOptions& opts) {
    auto preds = default_p(f, p);
    Prepared pr = prepare(f, i, preds, {});
    Compiled c(f, i, pr.space, pr.intensional);
    AtomMask im = pr.space.mask_of(i);
    if (!c.eval(im)) return false;
    auto atoms = true_intensional(pr.space, pr.intensional, im);
    check_budget(atoms.size(), 2, opts);
    std::uint64_t full = (std::uint64_t{1} << atoms.size()) - 1;
    for (std::uint64_t bits = 0; bits < full; ++bits) {
        AtomMask u = submask(atoms, bits, im.size());
        if (c.eval(im, &u, Mode::Star)) return false;
    }
    return true;
}

bool check_sm_nses(const Formula& f, const Interpretation& i, const std::optional<std::vector<Symbol>>& p,
                   const OracleOptions& opts) {
    auto preds = default_p(f, p);
    Prepared pr = prepare(f, i, preds, {});
    Compiled c(f, i, pr.space, pr.intensional);
    AtomMask im = pr.space.mask_of(i);
    if (!c.eval(im)) return false;
    auto atoms = true_intensional(pr.space, pr.intensional, im);
    check_budget(atoms.size(), 2, opts);
    std::uint64_t end = std::uint64_t{1} << atoms.size();
    for (std::uint64_t bits = 1; bits < end; ++bits) {
        AtomMask u = submask(atoms, bits, im.size());
        if (c.eval(im, &u, Mode::Nses)) return false;
    }
    return true;
}

bool check_sm_ext_loop(const Formula& f, const Interpretation& i, const std::optional<std::vector<Symbol>>& p,
                       const OracleOptions& opts) {
    auto preds = default_p(f, p);
    Prepared pr = prepare(f, i, preds, {});
    Compiled c(f, i, pr.space, pr.intensional);
    AtomMask im = pr.space.mask_of(i);
    if (!c.eval(im)) return false;
    auto atoms = true_intensional(pr.space, pr.intensional, im);
    check_budget(atoms.size(), 3, opts);
    WrtGraph g = wrt_graph(f, i);
    auto edges = local_edges(g, atoms);
    auto loop = loop_table(edges, atoms.size());
    std::uint64_t end = std::uint64_t{1} << atoms.size();
    for (std::uint64_t bits = 1; bits < end; ++bits) {
        if (!loop[bits] && !unbounded_bits(edges, loop, bits)) continue;
        AtomMask u = submask(atoms, bits, im.size());
        if (c.eval(im, &u, Mode::Nses)) return false;
    }
    return true;
}

WrtGraph wrt_graph(const Formula& f, const Interpretation& i) {
    WrtGraph g{atom_space(f, static_cast<int>(i.size())), {}};
    g.adj.assign(g.space.size(), {});
    std::vector<bool> none(g.space.predicates().size(), false);
    int n = static_cast<int>(i.size());
    for (const auto& dp : dependency_pairs(rectify(f))) {
        Formula pair = Formula::conj(dp.head, dp.body);
        auto vars = free_vars(pair);
        Compiled c(pair, i, g.space, none, vars);
        const auto& root = c.node(c.root());
        const auto& h = c.node(root.left);
        const auto& b = c.node(root.right);
        std::vector<int> env(static_cast<std::size_t>(c.slots()), 0);
        std::size_t k = vars.size();
        while (true) {
            auto hi = c.atom_index(h, env);
            auto bi = static_cast<int>(c.atom_index(b, env));
            auto& out = g.adj[hi];
            if (std::find(out.begin(), out.end(), bi) == out.end()) out.push_back(bi);
            std::size_t j = 0;
            while (j < k && ++env[j] == n) env[j++] = 0;
            if (j == k) break;
        }
    }
    for (auto& out : g.adj) std::sort(out.begin(), out.end());
    return g;
}

namespace {
std::vector<std::size_t> members(const AtomMask& y) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < y.size(); ++a)
        if (y[a]) out.push_back(a);
    return out;
}
}  // namespace

bool graph_is_loop(const WrtGraph& g, const AtomMask& y) {
    auto vs = members(y);
    if (vs.empty()) return false;
    std::vector<int> local(g.adj.size(), -1);
    for (std::size_t j = 0; j < vs.size(); ++j) local[vs[j]] = static_cast<int>(j);
    std::vector<std::vector<int>> adj(vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j)
        for (int b : g.adj[vs[j]])
            if (local[static_cast<std::size_t>(b)] >= 0) adj[j].push_back(local[static_cast<std::size_t>(b)]);
    return strongly_connected_components(adj).size() == 1;
}

bool graph_is_unbounded(const WrtGraph& g, const AtomMask& y) {
    auto vs = members(y);
    if (vs.empty()) return false;
    if (vs.size() > 20) throw Error(ErrorKind::Budget, "budget exceeded: unbounded-set check over more than 20 atoms");
    std::uint64_t all = (std::uint64_t{1} << vs.size()) - 1;
    for (std::uint64_t z = 1; z <= all; ++z) {
        AtomMask zm(y.size(), 0);
        for (std::size_t j = 0; j < vs.size(); ++j)
            if (z >> j & 1) zm[vs[j]] = 1;
        if (!graph_is_loop(g, zm)) continue;
        bool out = false;
        for (std::size_t j = 0; j < vs.size() && !out; ++j) {
            if (!(z >> j & 1)) continue;
            for (int b : g.adj[vs[j]])
                if (y[static_cast<std::size_t>(b)] && !zm[static_cast<std::size_t>(b)]) {
                    out = true;
                    break;
                }
        }
        if (!out) return false;
    }
    return true;
}

LoopsAndUnbounded loops_and_unbounded_wrt(const Formula& f, const Interpretation& i) {
    WrtGraph g = wrt_graph(f, i);
    LoopsAndUnbounded r;
    std::size_t n = g.adj.size();
    if (n <= 12) {
        r.exhaustive = true;
        for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
            AtomMask y(n, 0);
            for (std::size_t a = 0; a < n; ++a) y[a] = bits >> a & 1;
            if (graph_is_loop(g, y))
                r.loops.push_back(y);
            else if (graph_is_unbounded(g, y))
                r.unbounded.push_back(y);
        }
        return r;
    }
    std::vector<AtomMask> seen;
    for (std::size_t a = 0; a < n; ++a) {
        AtomMask y(n, 0);
        y[a] = 1;
        r.loops.push_back(y);
    }
    for (const auto& comp : strongly_connected_components(g.adj)) {
        if (comp.size() < 2) continue;
        AtomMask y(n, 0);
        for (int a : comp) y[static_cast<std::size_t>(a)] = 1;
        r.loops.push_back(y);
    }
    std::sort(r.loops.begin(), r.loops.end());
    return r;
}

LoopPredicates loop_predicate_eval(const Formula& f, const Interpretation& i, const AtomMask& q) {
    WrtGraph g = wrt_graph(f, i);
    if (q.size() != g.adj.size()) throw Error(ErrorKind::InvalidArgument, "assignment does not match the atom space");
    auto atoms = members(q);
    if (atoms.size() > 16) throw Error(ErrorKind::Budget, "budget exceeded: loop predicates over more than 16 atoms");
    LoopPredicates r;
    r.nonempty = !atoms.empty();
    if (!r.nonempty) return r;
    auto edges = local_edges(g, atoms);
    auto loop = loop_table(edges, atoms.size());
    std::uint64_t all = (std::uint64_t{1} << atoms.size()) - 1;
    r.is_loop = loop[all] != 0;
    r.is_unbounded = unbounded_bits(edges, loop, all);
    r.is_ext_loop = r.is_loop || r.is_unbounded;
    return r;
}

bool e_f_eval(const Formula& f, const Interpretation& i, const AtomMask& v, const AtomMask& u) {
    WrtGraph g = wrt_graph(f, i);
    if (v.size() != g.adj.size() || u.size() != g.adj.size())
        throw Error(ErrorKind::InvalidArgument, "assignment does not match the atom space");
    for (std::size_t h = 0; h < g.adj.size(); ++h) {
        if (!v[h]) continue;
        for (int b : g.adj[h])
            if (u[static_cast<std::size_t>(b)] && !v[static_cast<std::size_t>(b)]) return true;
    }
    return false;
}

}  // namespace sloop
