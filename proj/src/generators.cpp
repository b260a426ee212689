#include "sloop/generators.hpp"

#include <algorithm>
#include <set>

#include "sloop/parser.hpp"
#include "sloop/transform.hpp"

namespace sloop {

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::ES: return "es";
        case Flavor::ESDisjunctive: return "es-disj";
        case Flavor::NES: return "nes";
        case Flavor::QES: return "qes";
    }
    return "?";
}

std::optional<Flavor> parse_flavor(const std::string& s) {
    for (Flavor f : {Flavor::ES, Flavor::ESDisjunctive, Flavor::NES, Flavor::QES})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

Flavor default_flavor(const Program& program) {
    switch (program.kind()) {
        case RuleKind::Nondisjunctive: return Flavor::ES;
        case RuleKind::Disjunctive: return Flavor::ESDisjunctive;
        case RuleKind::Quantifier: return Flavor::QES;
    }
    return Flavor::QES;
}

namespace {

std::set<std::string> y_vars(const AtomSet& y) {
    auto vs = atom_set_vars(y);
    return {vs.begin(), vs.end()};
}

void require_nonempty(const AtomSet& y) {
    if (y.empty()) throw Error(ErrorKind::InvalidArgument, "the atom set must be nonempty");
}

bool y_has_pred(const AtomSet& y, const std::string& p) {
    return std::any_of(y.begin(), y.end(), [&](const Formula& a) { return a.pred() == p; });
}

// t != t' for every atom of y over the same predicate.
std::vector<Formula> inequalities(const Formula& atom, const AtomSet& y) {
    std::vector<Formula> out;
    for (const auto& ya : y)
        if (ya.pred() == atom.pred() && ya.args().size() == atom.args().size())
            out.push_back(tuple_not_equal(atom.args(), ya.args()));
    return out;
}

// p(t) & t != t' & ... (just p(t) when y has no atom over p).
Formula guarded(const Formula& atom, const AtomSet& y) {
    std::vector<Formula> parts{atom};
    auto ineq = inequalities(atom, y);
    parts.insert(parts.end(), ineq.begin(), ineq.end());
    return Formula::conj_all(parts);
}

std::vector<std::string> outside(const std::vector<std::string>& vs, const std::set<std::string>& yv) {
    std::vector<std::string> out;
    for (const auto& v : vs)
        if (!yv.count(v)) out.push_back(v);
    return out;
}

void push_unique(std::vector<Formula>& v, const Formula& f) {
    if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
}

// B-theta, N-theta in the original order, followed by the inequalities for the atoms of B-theta.
std::vector<Formula> instantiated_body(const Rule& r, const Substitution& th, const AtomSet& y) {
    std::vector<Formula> parts, ineqs;
    for (const auto& b : r.body) {
        Formula bt = th.apply(b);
        parts.push_back(bt);
        if (bt.is_atom())
            for (const auto& q : inequalities(bt, y)) ineqs.push_back(q);
    }
    parts.insert(parts.end(), ineqs.begin(), ineqs.end());
    return parts;
}

void subterms(const Term& t, std::vector<Term>& out) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    for (const auto& a : t.args()) subterms(a, out);
}

Formula nes_rec(const Formula& f, const AtomSet& y) {
    switch (f.kind()) {
        case FormulaKind::Atom: return y_has_pred(y, f.pred()) ? guarded(f, y) : f;
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return f;
        case FormulaKind::And: return Formula::conj(nes_rec(f.left(), y), nes_rec(f.right(), y));
        case FormulaKind::Or: return Formula::disj(nes_rec(f.left(), y), nes_rec(f.right(), y));
        case FormulaKind::Implies:
            return Formula::conj(Formula::implies(nes_rec(f.left(), y), nes_rec(f.right(), y)), f);
        case FormulaKind::Forall: return Formula::forall(f.var(), nes_rec(f.body(), y));
        case FormulaKind::Exists: return Formula::exists(f.var(), nes_rec(f.body(), y));
    }
    return f;
}

bool implications_negative(const Formula& f) {
    if (is_negative(f)) return true;
    switch (f.kind()) {
        case FormulaKind::Implies: return false;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return implications_negative(f.body());
        case FormulaKind::And:
        case FormulaKind::Or: return implications_negative(f.left()) && implications_negative(f.right());
        default: return true;
    }
}

Formula f_sub_rec(const Formula& f, const AtomSet& y) {
    if (is_negative(f)) return f;
    switch (f.kind()) {
        case FormulaKind::Atom: return y_has_pred(y, f.pred()) ? guarded(f, y) : f;
        case FormulaKind::And: return Formula::conj(f_sub_rec(f.left(), y), f_sub_rec(f.right(), y));
        case FormulaKind::Or: return Formula::disj(f_sub_rec(f.left(), y), f_sub_rec(f.right(), y));
        case FormulaKind::Forall: return Formula::forall(f.var(), f_sub_rec(f.body(), y));
        case FormulaKind::Exists: return Formula::exists(f.var(), f_sub_rec(f.body(), y));
        default: return f;
    }
}

bool strictly_positive_pred_in(const Formula& f, const AtomSet& y) {
    switch (f.kind()) {
        case FormulaKind::Atom: return y_has_pred(y, f.pred());
        case FormulaKind::Equal:
        case FormulaKind::Bottom: return false;
        case FormulaKind::Forall:
        case FormulaKind::Exists: return strictly_positive_pred_in(f.body(), y);
        case FormulaKind::Implies: return strictly_positive_pred_in(f.right(), y);
        default: return strictly_positive_pred_in(f.left(), y) || strictly_positive_pred_in(f.right(), y);
    }
}

Formula closure_of(const AtomSet& y, const Formula& support) {
    return universal_closure(Formula::implies(Formula::conj_all(y), support));
}

std::vector<Symbol> predicate_list(const Formula& f, const std::optional<std::vector<Symbol>>& p) {
    return p ? *p : signature_of(f).predicates();
}

std::vector<std::string> names_of(const std::vector<Symbol>& ps) {
    std::vector<std::string> out;
    for (const auto& s : ps) out.push_back(s.name);
    return out;
}

bool covers_signature(const Formula& f, const std::vector<Symbol>& p) {
    Signature sig = signature_of(f);
    for (const auto& s : sig.predicates())
        if (std::find(p.begin(), p.end(), s) == p.end()) return false;
    return std::all_of(p.begin(), p.end(), [&](const Symbol& s) { return sig.predicate_arity(s.name).has_value(); });
}

bool loop_within(const AtomSet& y, const std::vector<Symbol>& p) {
    return std::all_of(y.begin(), y.end(), [&](const Formula& a) {
        return std::any_of(p.begin(), p.end(), [&](const Symbol& s) { return s.name == a.pred(); });
    });
}

}  // namespace

Formula es_nondisjunctive(const Program& program, const AtomSet& y) {
    require_nonempty(y);
    if (program.kind() != RuleKind::Nondisjunctive)
        throw Error(ErrorKind::InvalidArgument, "this support formula needs a nondisjunctive program");
    auto yv = y_vars(y);
    std::vector<Formula> disjuncts;
    for (const auto& rule : normalize(program).rules) {
        if (rule.head.empty()) continue;
        Rule r = rename_rule_apart(rule, yv);
        const Formula& a = r.head[0];
        for (const auto& ya : y) {
            if (ya.pred() != a.pred() || ya.args().size() != a.args().size()) continue;
            Substitution th;
            for (std::size_t i = 0; i < a.args().size(); ++i) th.bind(a.args()[i].name(), ya.args()[i]);
            Formula body = Formula::conj_all(instantiated_body(r, th, y));
            auto z = outside(free_vars(Formula::implies(body, th.apply(a))), yv);
            push_unique(disjuncts, Formula::exists(z, body));
        }
    }
    return Formula::disj_all(disjuncts);
}

Formula es_disjunctive(const Program& program, const AtomSet& y) {
    require_nonempty(y);
    if (program.kind() == RuleKind::Quantifier)
        throw Error(ErrorKind::InvalidArgument, "this support formula needs a disjunctive or nondisjunctive program");
    auto yv = y_vars(y);
    std::vector<Term> terms;
    for (const auto& a : y)
        for (const auto& t : a.args()) subterms(t, terms);
    std::vector<Formula> disjuncts;
    for (const auto& rule : normalize(program).rules) {
        if (rule.head.empty()) continue;
        Rule r = rename_rule_apart(rule, yv);
        std::vector<std::string> hv;
        for (const auto& h : r.head) {
            auto vs = vars_of(h.args());
            for (const auto& v : vs)
                if (std::find(hv.begin(), hv.end(), v) == hv.end()) hv.push_back(v);
        }
        double combos = 1;
        for (std::size_t i = 0; i < hv.size(); ++i) combos *= static_cast<double>(terms.size() + 1);
        if (combos > 1e6) throw Error(ErrorKind::Budget, "too many head substitutions for the support formula");
        std::vector<std::size_t> choice(hv.size(), 0);
        for (;;) {
            Substitution th;
            for (std::size_t i = 0; i < hv.size(); ++i)
                if (choice[i] < terms.size()) th.bind(hv[i], terms[choice[i]]);
            std::vector<Formula> head;
            for (const auto& h : r.head) head.push_back(th.apply(h));
            bool hits = std::any_of(head.begin(), head.end(),
                                    [&](const Formula& h) { return std::find(y.begin(), y.end(), h) != y.end(); });
            if (hits) {
                auto parts = instantiated_body(r, th, y);
                std::vector<Formula> rest;
                for (const auto& h : head) rest.push_back(guarded(h, y));
                parts.push_back(Formula::neg(Formula::disj_all(rest)));
                Formula body = Formula::conj_all(parts);
                auto z = outside(free_vars(Formula::implies(body, Formula::disj_all(head))), yv);
                push_unique(disjuncts, Formula::exists(z, body));
            }
            std::size_t k = 0;
            while (k < choice.size() && ++choice[k] > terms.size()) choice[k++] = 0;
            if (k == choice.size()) break;
        }
    }
    return Formula::disj_all(disjuncts);
}

Formula nes(const Formula& f, const AtomSet& y) {
    require_nonempty(y);
    return nes_rec(rename_bound_apart(f, y_vars(y)), y);
}

Formula f_sub_y(const Formula& f, const AtomSet& y) {
    if (!implications_negative(f))
        throw Error(ErrorKind::InvalidArgument, "implication not inside negative formula");
    return f_sub_rec(rename_bound_apart(f, y_vars(y)), y);
}

Formula qes(const Program& program, const AtomSet& y) {
    require_nonempty(y);
    auto yv = y_vars(y);
    std::vector<Formula> disjuncts;
    for (const auto& rule : program.rules) {
        Rule r = rename_rule_apart(rule, yv);
        Formula h = r.head_formula();
        if (!strictly_positive_pred_in(h, y)) continue;
        Formula hy = Formula::neg(f_sub_y(h, y));
        Formula body = r.body.empty() ? hy : Formula::conj(f_sub_y(r.body_formula(), y), hy);
        auto z = outside(free_vars(rule_formula(r)), yv);
        push_unique(disjuncts, Formula::exists(z, body));
    }
    return Formula::disj_all(disjuncts);
}

Formula loop_formula(const Program& program, const AtomSet& y, Flavor flavor) {
    switch (flavor) {
        case Flavor::ES: return closure_of(y, es_nondisjunctive(program, y));
        case Flavor::ESDisjunctive: return closure_of(y, es_disjunctive(program, y));
        case Flavor::QES: return closure_of(y, qes(program, y));
        case Flavor::NES: return loop_formula(rectify(fol_representation(program)), y);
    }
    return Formula::top();
}

Formula loop_formula(const Formula& f, const AtomSet& y) { return closure_of(y, Formula::neg(nes(f, y))); }

// ------------------------------------------------------------ loop sets

LoopFormulaSet slf(const Formula& f, const std::optional<std::vector<Symbol>>& p) {
    LoopFormulaSet out;
    out.base = f;
    out.provenance = "singleton loop formulas";
    NameSupply names(all_var_names(f));
    for (const auto& s : predicate_list(f, p)) {
        std::vector<Term> args;
        for (int i = 0; i < s.arity; ++i) args.push_back(Term::var(names.fresh()));
        AtomSet y{Formula::atom(s.name, args)};
        out.formulas.push_back({to_string(y), y, loop_formula(f, y)});
    }
    return out;
}

Formula spp_axioms(const Formula& f, const std::optional<std::vector<Symbol>>& p) {
    Signature sig = signature_of(f);
    auto consts = sig.object_constants();
    if (consts.empty())
        throw Error(ErrorKind::InvalidArgument, "the formula has no object constants, so the small predicate property is undefined");
    if (sig.has_positive_arity_functions())
        throw Error(ErrorKind::Unsupported, "the small predicate property needs a formula without positive-arity functions");
    NameSupply names(all_var_names(f));
    std::vector<Formula> parts;
    for (const auto& s : predicate_list(f, p)) {
        std::vector<std::string> vs;
        std::vector<Term> args;
        std::vector<Formula> members;
        for (int i = 0; i < s.arity; ++i) {
            vs.push_back(names.fresh());
            args.push_back(Term::var(vs.back()));
            std::vector<Formula> in_c;
            for (const auto& c : consts) in_c.push_back(Formula::equal(args.back(), Term::constant(c)));
            members.push_back(Formula::disj_all(in_c));
        }
        parts.push_back(Formula::forall(vs, Formula::implies(Formula::atom(s.name, args), Formula::conj_all(members))));
    }
    return Formula::conj_all(parts);
}

LoopFormulaSet finite_universe_lf_set(const Formula& f, int n, const std::optional<std::vector<Symbol>>& p) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "the universe size must be positive");
    auto preds = predicate_list(f, p);
    if (preds.size() > 20) throw Error(ErrorKind::Budget, "too many predicates for the finite-universe scheme");
    LoopFormulaSet out;
    out.base = f;
    out.provenance = "finite-universe scheme, universe size " + std::to_string(n);
    NameSupply names(all_var_names(f));
    for (std::uint32_t mask = 1; mask < (1u << preds.size()); ++mask) {
        AtomSet y;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            std::size_t count = 1;
            for (int k = 0; k < preds[i].arity; ++k) count *= static_cast<std::size_t>(n);
            for (std::size_t c = 0; c < count; ++c) {
                std::vector<Term> args;
                for (int k = 0; k < preds[i].arity; ++k) args.push_back(Term::var(names.fresh()));
                y.push_back(Formula::atom(preds[i].name, args));
            }
        }
        out.formulas.push_back({to_string(y), y, loop_formula(f, y)});
    }
    return out;
}

// ------------------------------------------------------------ pipelines

namespace {

const char* kCetCondition = "interpretations must satisfy Clark's equational theory";
const char* kNormalCondition = "input is in normal form";

template <typename MakeLf>
LoopFormulaSet bounded_impl(const Formula& f, const std::vector<Symbol>& p, const PipelineOptions& opts,
                              bool normal_form, MakeLf make_lf) {
    Formula g = covers_signature(f, p) ? f : rectify(extensional_transform(f, p));
    Verdict b = is_bounded(g, opts.assume_bounded);
    if (b.value != Verdict::Yes)
        throw Error(ErrorKind::InvalidArgument,
                    "the reduction needs a bounded formula (" + to_string(b) + (b.reason.empty() ? "" : ": " + b.reason) + ")");
    if (opts.normal_form_variant && !normal_form)
        throw Error(ErrorKind::InvalidArgument, "the normal-form variant needs input in normal form");
    LoopSetResult loops = enumerate_loops(g, opts.depth);
    LoopFormulaSet out;
    out.base = f;
    out.provenance = "complete set of loops";
    out.side_conditions.push_back(opts.normal_form_variant ? kNormalCondition : kCetCondition);
    if (opts.assume_bounded && signature_of(g).has_positive_arity_functions())
        out.side_conditions.push_back("boundedness assumed by the caller");
    if (loops.status != LoopStatus::Complete)
        out.side_conditions.push_back("loop set is depth-bounded and may be incomplete");
    else if (loops.caveat)
        out.side_conditions.push_back("loop set completeness inferred from saturation only");
    for (const auto& y : loops.loops)
        if (loop_within(y, p)) out.formulas.push_back({to_string(y), y, make_lf(y)});
    return out;
}

template <typename MakeLf>
LoopFormulaSet semi_safe_impl(const Formula& f, const std::vector<Symbol>& p, MakeLf make_alternative) {
    Signature sig = signature_of(f);
    if (sig.has_positive_arity_functions())
        throw Error(ErrorKind::Unsupported, "this reduction needs a formula without positive-arity functions");
    Formula g = covers_signature(f, p) ? f : rectify(extensional_transform(f, p));
    bool semi = is_semi_safe(f, names_of(p));
    LoopSetResult loops = enumerate_loops(g);
    bool complete = loops.status == LoopStatus::Complete;
    std::vector<LabeledFormula> complete_lfs;
    if (complete)
        for (const auto& y : loops.loops)
            if (loop_within(y, p)) complete_lfs.push_back({to_string(y), y, make_alternative(g, y)});

    LoopFormulaSet out;
    out.base = f;
    if (semi) {
        out.provenance = "semi-safe: small predicate property and finite-universe scheme";
        out.formulas.push_back({"spp", {}, spp_axioms(f, p)});
        auto scheme = finite_universe_lf_set(g, static_cast<int>(sig.object_constants().size()), p);
        out.formulas.insert(out.formulas.end(), scheme.formulas.begin(), scheme.formulas.end());
        out.alternative = std::move(complete_lfs);
        if (!out.alternative.empty()) out.side_conditions.push_back("alternative set: " + std::string(kCetCondition));
        return out;
    }
    if (!complete)
        throw Error(ErrorKind::InvalidArgument, "the formula is not semi-safe and has no finite complete set of loops");
    out.provenance = "complete set of loops (formula is not semi-safe)";
    out.formulas = std::move(complete_lfs);
    out.side_conditions.push_back(kCetCondition);
    return out;
}

}  // namespace

LoopFormulaSet bounded_pipeline(const Program& program, const PipelineOptions& opts) {
    Formula f = rectify(fol_representation(program));
    Flavor flavor = opts.flavor.value_or(default_flavor(program));
    return bounded_impl(f, program.intensional_predicates(), opts, is_normal_form(program),
                          [&](const AtomSet& y) { return loop_formula(program, y, flavor); });
}

LoopFormulaSet bounded_pipeline(const Formula& f, const PipelineOptions& opts) {
    if (opts.flavor && *opts.flavor != Flavor::NES)
        throw Error(ErrorKind::InvalidArgument, "formula input supports only the nes flavor");
    Formula rf = rectify(f);
    return bounded_impl(rf, signature_of(rf).predicates(), opts, is_normal_form(rf),
                          [&](const AtomSet& y) { return loop_formula(rf, y); });
}

LoopFormulaSet semi_safe_pipeline(const Formula& f, const std::optional<std::vector<Symbol>>& p) {
    Formula rf = rectify(f);
    return semi_safe_impl(rf, predicate_list(rf, p), [](const Formula& g, const AtomSet& y) { return loop_formula(g, y); });
}

LoopFormulaSet semi_safe_pipeline(const Program& program, const std::optional<std::vector<Symbol>>& p) {
    Formula f = rectify(fol_representation(program));
    auto preds = p ? *p : program.intensional_predicates();
    bool proper = !covers_signature(f, preds);
    Flavor flavor = default_flavor(program);
    return semi_safe_impl(f, preds, [&](const Formula& g, const AtomSet& y) {
        return proper ? loop_formula(g, y) : loop_formula(program, y, flavor);
    });
}

}  // namespace sloop
