#include <algorithm>

#include "compiled.hpp"
#include "sloop/analysis.hpp"
#include "sloop/oracle.hpp"

namespace sloop {

using detail::Compiled;
using detail::Mode;

namespace {

constexpr std::uint8_t kFalse = 0, kTrue = 1, kUnknown = 2;

// Depth-first search over atom values with three-valued pruning and an
// upper bound on the intensional atoms any stable extension can make true.
class Solver {
public:
    Solver(const Compiled& c, const std::vector<bool>& intensional, std::vector<std::size_t> order,
           const OracleOptions& opts)
        : c_(c), intensional_(intensional), order_(std::move(order)), opts_(opts) {
        const auto& space = c.space();
        atom_intensional_.resize(space.size());
        for (std::size_t pid = 0; pid < space.predicates().size(); ++pid)
            for (std::size_t k = 0; k < space.count(static_cast<int>(pid)); ++k)
                atom_intensional_[space.offset(static_cast<int>(pid)) + k] = intensional_[pid];
        compute_negative();
        env_.assign(static_cast<std::size_t>(c.slots()), 0);
    }

    std::vector<AtomMask> run() {
        pa_.assign(c_.space().size(), kUnknown);
        search(0);
        std::sort(found_.begin(), found_.end());
        return found_;
    }

private:
    void compute_negative() {
        negative_.assign(static_cast<std::size_t>(c_.root()) + 1, false);
        // Children precede parents in node order.
        for (int id = 0; id <= c_.root(); ++id) {
            const auto& nd = c_.node(id);
            bool neg = false;
            switch (nd.kind) {
            case FormulaKind::Atom: neg = false; break;
            case FormulaKind::Equal:
            case FormulaKind::Bottom: neg = true; break;
            case FormulaKind::And:
            case FormulaKind::Or: neg = negative_[static_cast<std::size_t>(nd.left)] && negative_[static_cast<std::size_t>(nd.right)]; break;
            case FormulaKind::Implies: neg = negative_[static_cast<std::size_t>(nd.right)]; break;
            case FormulaKind::Forall:
            case FormulaKind::Exists: neg = negative_[static_cast<std::size_t>(nd.left)]; break;
            }
            negative_[static_cast<std::size_t>(id)] = neg;
        }
    }

    void add(std::size_t a) {
        if (atom_intensional_[a] && !ub_[a]) {
            ub_[a] = 1;
            changed_ = true;
        }
    }

    // Atoms outside negative subformulas, for every value of the inner variables.
    void add_all(int id) {
        if (negative_[static_cast<std::size_t>(id)]) return;
        const auto& nd = c_.node(id);
        switch (nd.kind) {
        case FormulaKind::Atom: add(c_.atom_index(nd, env_)); break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            add_all(nd.left);
            add_all(nd.right);
            break;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            int saved = env_[static_cast<std::size_t>(nd.slot)];
            for (int e = 0; e < c_.universe_size(); ++e) {
                env_[static_cast<std::size_t>(nd.slot)] = e;
                add_all(nd.left);
            }
            env_[static_cast<std::size_t>(nd.slot)] = saved;
            break;
        }
        default: break;
        }
    }

    // Walk of the strictly positive part; implications met here are rules.
    void walk(int id) {
        const auto& nd = c_.node(id);
        switch (nd.kind) {
        case FormulaKind::Atom: add(c_.atom_index(nd, env_)); break;
        case FormulaKind::And:
        case FormulaKind::Or:
            walk(nd.left);
            walk(nd.right);
            break;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            int saved = env_[static_cast<std::size_t>(nd.slot)];
            for (int e = 0; e < c_.universe_size(); ++e) {
                env_[static_cast<std::size_t>(nd.slot)] = e;
                walk(nd.left);
            }
            env_[static_cast<std::size_t>(nd.slot)] = saved;
            break;
        }
        case FormulaKind::Implies:
            if (negative_[static_cast<std::size_t>(nd.right)]) break;
            if (c_.kleene(nd.left, env_, pa_, nullptr, Mode::Plain) == kFalse) break;
            if (c_.kleene(nd.left, env_, pa_, &ub_, Mode::Star) == kFalse) break;
            add_all(nd.right);
            break;
        default: break;
        }
    }

    bool propagate() {
        ub_.assign(pa_.size(), 0);
        do {
            changed_ = false;
            walk(c_.root());
        } while (changed_);
        for (std::size_t a = 0; a < pa_.size(); ++a) {
            if (!atom_intensional_[a] || ub_[a]) continue;
            if (pa_[a] == kTrue) return false;
            pa_[a] = kFalse;
        }
        return c_.kleene(c_.root(), env_, pa_, nullptr, Mode::Plain) != kFalse;
    }

    bool stable(const AtomMask& i) {
        if (!c_.eval(i)) return false;
        std::vector<std::size_t> atoms;
        for (std::size_t a = 0; a < i.size(); ++a)
            if (i[a] && atom_intensional_[a]) atoms.push_back(a);
        if (atoms.size() >= 40 || (std::uint64_t{1} << atoms.size()) > opts_.budget)
            throw Error(ErrorKind::Budget, "budget exceeded: more than " + std::to_string(opts_.budget) + " sub-assignments");
        std::uint64_t full = (std::uint64_t{1} << atoms.size()) - 1;
        AtomMask u(i.size(), 0);
        for (std::uint64_t bits = 0; bits < full; ++bits) {
            for (std::size_t j = 0; j < atoms.size(); ++j) u[atoms[j]] = bits >> j & 1;
            if (c_.eval(i, &u, Mode::Star)) return false;
        }
        return true;
    }

    void search(std::size_t pos) {
        AtomMask saved = pa_;
        if (propagate()) {
            while (pos < order_.size() && pa_[order_[pos]] != kUnknown) ++pos;
            if (pos == order_.size()) {
                if (stable(pa_)) found_.push_back(pa_);
            } else {
                std::size_t a = order_[pos];
                for (std::uint8_t v : {kFalse, kTrue}) {
                    AtomMask before = pa_;
                    pa_[a] = v;
                    search(pos + 1);
                    pa_ = before;
                }
            }
        }
        pa_ = saved;
    }

    const Compiled& c_;
    const std::vector<bool>& intensional_;
    std::vector<bool> atom_intensional_;
    std::vector<bool> negative_;
    std::vector<std::size_t> order_;
    const OracleOptions& opts_;
    std::vector<int> env_;
    AtomMask pa_;
    AtomMask ub_;
    bool changed_ = false;
    std::vector<AtomMask> found_;
};

// Extensional atoms first, then intensional predicates with bodies before heads.
std::vector<std::size_t> atom_order(const Formula& f, const AtomSpace& space, const std::vector<bool>& intensional) {
    std::size_t np = space.predicates().size();
    std::vector<std::vector<int>> adj(np);
    for (const auto& dp : dependency_pairs(f)) {
        auto h = space.pred_id(dp.head.pred());
        auto b = space.pred_id(dp.body.pred());
        if (h && b) adj[static_cast<std::size_t>(*h)].push_back(*b);
    }
    std::vector<int> preds;
    for (std::size_t pid = 0; pid < np; ++pid)
        if (!intensional[pid]) preds.push_back(static_cast<int>(pid));
    for (const auto& comp : strongly_connected_components(adj))
        for (int pid : comp)
            if (intensional[static_cast<std::size_t>(pid)]) preds.push_back(pid);
    std::vector<std::size_t> order;
    for (int pid : preds)
        for (std::size_t k = 0; k < space.count(pid); ++k) order.push_back(space.offset(pid) + k);
    return order;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}

// Odometer over digits in [0, n); the last digit moves fastest.
bool advance(std::vector<int>& digits, int n) {
    for (std::size_t j = digits.size(); j-- > 0;) {
        if (++digits[j] < n) return true;
        digits[j] = 0;
    }
    return false;
}

}  // namespace

void for_each_stable_model(const Formula& f, const std::vector<Symbol>& p, int universe_size, bool herbrand,
                           const std::function<bool(const Interpretation&)>& visit, const SearchOptions& opts) {
    Signature sig = signature_of(f);
    auto constants = sig.object_constants();
    std::sort(constants.begin(), constants.end());
    std::vector<Symbol> functions;
    for (const auto& s : sig.functions())
        if (s.arity > 0) functions.push_back(s);
    std::sort(functions.begin(), functions.end());

    std::vector<std::string> universe;
    if (herbrand) {
        if (constants.empty())
            throw Error(ErrorKind::InvalidArgument, "Herbrand enumeration needs at least one object constant");
        if (!functions.empty())
            throw Error(ErrorKind::Unsupported, "Herbrand enumeration needs a finite Herbrand universe (no function constants)");
        universe = constants;
    } else {
        if (universe_size < 1) throw Error(ErrorKind::InvalidArgument, "universe size must be at least 1");
        for (int e = 0; e < universe_size; ++e) universe.push_back("e" + std::to_string(e));
    }
    int n = static_cast<int>(universe.size());

    std::uint64_t structures = 1;
    if (!herbrand) {
        structures = saturating_pow(static_cast<std::uint64_t>(n), constants.size(), opts.max_structures);
        for (const auto& fn : functions) {
            std::uint64_t entries = saturating_pow(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(fn.arity), 64);
            if (entries > 64) throw Error(ErrorKind::Budget, "budget exceeded: function table too large");
            structures *= saturating_pow(static_cast<std::uint64_t>(n), entries, opts.max_structures);
            if (structures > opts.max_structures) break;
        }
        if (structures > opts.max_structures)
            throw Error(ErrorKind::Budget, "budget exceeded: more than " + std::to_string(opts.max_structures) + " structures");
    }

    AtomSpace space = atom_space(f, n, p);
    auto intensional = detail::intensional_flags(space, p);
    auto order = atom_order(f, space, intensional);

    std::vector<int> const_digits(constants.size(), 0);
    std::vector<int> fn_digits;
    std::vector<std::size_t> fn_sizes;
    if (!herbrand) {
        for (const auto& fn : functions) {
            fn_sizes.push_back(static_cast<std::size_t>(saturating_pow(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(fn.arity), 64)));
            fn_digits.resize(fn_digits.size() + fn_sizes.back(), 0);
        }
    } else {
        for (std::size_t k = 0; k < constants.size(); ++k) const_digits[k] = static_cast<int>(k);
    }

    while (true) {
        Interpretation structure(universe);
        for (std::size_t k = 0; k < constants.size(); ++k) structure.set_constant(constants[k], const_digits[k]);
        std::size_t at = 0;
        for (std::size_t k = 0; k < functions.size(); ++k) {
            std::vector<int> table(fn_digits.begin() + static_cast<std::ptrdiff_t>(at),
                                   fn_digits.begin() + static_cast<std::ptrdiff_t>(at + fn_sizes[k]));
            structure.set_function(functions[k].name, functions[k].arity, table);
            at += fn_sizes[k];
        }
        Compiled c(f, structure, space, intensional);
        Solver solver(c, intensional, order, opts.oracle);
        for (const auto& mask : solver.run()) {
            Interpretation model = structure;
            space.store(mask, model);
            if (!visit(model)) return;
        }
        if (herbrand) return;
        if (advance(fn_digits, n)) continue;
        if (!advance(const_digits, n)) return;
    }
}

std::vector<Interpretation> enumerate_stable_models(const Formula& f, const std::optional<std::vector<Symbol>>& p,
                                                    int universe_size, bool herbrand, const SearchOptions& opts) {
    std::vector<Symbol> preds;
    if (p) {
        preds = *p;
    } else {
        Signature sig = signature_of(f);
        preds = sig.predicates();
    }
    std::vector<Interpretation> out;
    for_each_stable_model(
        f, preds, universe_size, herbrand,
        [&](const Interpretation& m) {
            out.push_back(m);
            return true;
        },
        opts);
    return out;
}

EntailmentResult check_entailment_finite(const Formula& gamma, const Formula& query,
                                         const std::optional<std::vector<Symbol>>& p, int max_universe,
                                         const SearchOptions& opts) {
    if (max_universe < 1) throw Error(ErrorKind::InvalidArgument, "maximum universe size must be at least 1");
    Signature gsig = signature_of(gamma);
    Signature qsig = signature_of(query);
    if (!free_vars(query).empty()) throw Error(ErrorKind::InvalidArgument, "query must be a sentence");
    // Query constants join the signature without constraining the search.
    Formula f = gamma;
    auto known = gsig.object_constants();
    for (const auto& cst : qsig.object_constants())
        if (std::find(known.begin(), known.end(), cst) == known.end())
            f = Formula::conj(f, Formula::equal(Term::constant(cst), Term::constant(cst)));
    for (const auto& fn : qsig.functions())
        if (fn.arity > 0 && !gsig.function_arity(fn.name))
            throw Error(ErrorKind::Signature, "query function '" + fn.name + "' does not occur in the program");
    std::vector<Symbol> preds = p ? *p : gsig.predicates();

    EntailmentResult result;
    auto try_mode = [&](int n, bool herbrand) {
        for_each_stable_model(
            f, preds, n, herbrand,
            [&](const Interpretation& m) {
                if (eval(query, m)) return true;
                result.kind = EntailmentResult::Refuted;
                result.counter_model = m;
                result.universe = static_cast<int>(m.size());
                return false;
            },
            opts);
        return result.kind == EntailmentResult::Refuted;
    };
    for (int n = 1; n <= max_universe; ++n)
        if (try_mode(n, false)) return result;
    Signature fsig = signature_of(f);
    if (!fsig.object_constants().empty() && !fsig.has_positive_arity_functions()) {
        result.herbrand_checked = true;
        if (try_mode(0, true)) return result;
    }
    result.universe = max_universe;
    return result;
}

}  // namespace sloop
