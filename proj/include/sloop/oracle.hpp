#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sloop/interpretation.hpp"
#include "sloop/syntax.hpp"

namespace sloop {

using AtomMask = std::vector<std::uint8_t>;

// Flat numbering of the ground atoms p(e1..ek) over a universe of size n.
class AtomSpace {
public:
    AtomSpace() = default;
    AtomSpace(int n, std::vector<Symbol> preds);

    int universe_size() const { return n_; }
    const std::vector<Symbol>& predicates() const { return preds_; }
    std::size_t size() const { return total_; }
    std::optional<int> pred_id(const std::string& name) const;
    std::size_t offset(int pid) const { return offsets_[static_cast<std::size_t>(pid)]; }
    std::size_t count(int pid) const;
    std::size_t index(int pid, const std::vector<int>& tuple) const;
    std::pair<int, std::vector<int>> decode(std::size_t idx) const;
    std::string atom_name(std::size_t idx, const std::vector<std::string>& universe) const;

    AtomMask mask_of(const Interpretation& i) const;
    // Declares every predicate of the space in i and copies the mask into it.
    void store(const AtomMask& m, Interpretation& i) const;

private:
    int n_ = 0;
    std::vector<Symbol> preds_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

// Predicates of f followed by those of p not occurring in f.
AtomSpace atom_space(const Formula& f, int universe_size, const std::vector<Symbol>& p = {});

struct OracleOptions {
    std::uint64_t budget = std::uint64_t{1} << 22;  // sub-assignments per stability check
};

using Env = std::map<std::string, int>;
// Per-predicate extensions assigned to the predicate variables.
using SecondOrderAssignment = std::map<std::string, std::set<std::vector<int>>>;

bool eval(const Formula& f, const Interpretation& i, const Env& env = {});
// F*(u): atoms of p read u, all others read i.
bool eval_star(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p,
               const SecondOrderAssignment& u, const Env& env = {});
// NSES_F(u): atoms of p become p(t) & not u(t).
bool nses_eval(const Formula& f, const Interpretation& i, const std::vector<Symbol>& p,
               const SecondOrderAssignment& u, const Env& env = {});

// SM[F; p] by exhaustive search over proper sub-assignments. Default p: predicates of f.
bool check_sm(const Formula& f, const Interpretation& i, const std::optional<std::vector<Symbol>>& p = std::nullopt,
              const OracleOptions& opts = {});
// F & forall u (u <= p & Nonempty(u) -> not NSES_F(u)).
bool check_sm_nses(const Formula& f, const Interpretation& i, const std::optional<std::vector<Symbol>>& p = std::nullopt,
                   const OracleOptions& opts = {});
// Same with Nonempty(u) replaced by Ext-Loop_F(u).
bool check_sm_ext_loop(const Formula& f, const Interpretation& i,
                       const std::optional<std::vector<Symbol>>& p = std::nullopt, const OracleOptions& opts = {});

// Dependency graph w.r.t. an interpretation; vertices are the atoms of `space`.
struct WrtGraph {
    AtomSpace space;
    std::vector<std::vector<int>> adj;
};

WrtGraph wrt_graph(const Formula& f, const Interpretation& i);
bool graph_is_loop(const WrtGraph& g, const AtomMask& y);
bool graph_is_unbounded(const WrtGraph& g, const AtomMask& y);

struct LoopsAndUnbounded {
    std::vector<AtomMask> loops;
    std::vector<AtomMask> unbounded;
    bool exhaustive = false;  // all vertex subsets were examined
};

LoopsAndUnbounded loops_and_unbounded_wrt(const Formula& f, const Interpretation& i);

struct LoopPredicates {
    bool nonempty = false;
    bool is_loop = false;
    bool is_unbounded = false;
    bool is_ext_loop = false;
};

// Direct quantification over sub-assignments of q (a mask over wrt_graph(f, i).space).
LoopPredicates loop_predicate_eval(const Formula& f, const Interpretation& i, const AtomMask& q);
bool e_f_eval(const Formula& f, const Interpretation& i, const AtomMask& v, const AtomMask& u);

// ---------------------------------------------------------- model search

struct SearchOptions {
    OracleOptions oracle;
    std::uint64_t max_structures = 1000000;  // constant maps times function tables
};

// Stops when the visitor returns false.
void for_each_stable_model(const Formula& f, const std::vector<Symbol>& p, int universe_size, bool herbrand,
                           const std::function<bool(const Interpretation&)>& visit, const SearchOptions& opts = {});
std::vector<Interpretation> enumerate_stable_models(const Formula& f, const std::optional<std::vector<Symbol>>& p,
                                                    int universe_size, bool herbrand, const SearchOptions& opts = {});

struct EntailmentResult {
    enum Kind { Refuted, ConsistentUpTo } kind = ConsistentUpTo;
    std::optional<Interpretation> counter_model;
    int universe = 0;  // size of the counter-model, or the largest size checked
    bool herbrand_checked = false;
};

EntailmentResult check_entailment_finite(const Formula& gamma, const Formula& query,
                                         const std::optional<std::vector<Symbol>>& p, int max_universe,
                                         const SearchOptions& opts = {});

}  // namespace sloop
