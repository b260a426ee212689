#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sloop {

enum class ErrorKind {
    Parse,
    Signature,
    InvalidArgument,
    Unsupported,
    Budget,
    Tool,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// A term is a variable, a function application (object constant when nullary),
// or an object name standing for a universe element.
class Term {
public:
    enum class Kind { Variable, Function, Name };

    Term() = default;
    static Term var(std::string name);
    static Term fn(std::string name, std::vector<Term> args = {});
    static Term constant(std::string name) { return fn(std::move(name)); }
    static Term object_name(int element);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Variable; }
    bool is_fn() const { return kind_ == Kind::Function; }
    bool is_name() const { return kind_ == Kind::Name; }
    bool is_constant() const { return kind_ == Kind::Function && args_.empty(); }
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }
    int element() const { return element_; }

    bool operator==(const Term& o) const;
    std::strong_ordering operator<=>(const Term& o) const;

private:
    Kind kind_ = Kind::Variable;
    std::string name_;
    std::vector<Term> args_;
    int element_ = -1;
};

enum class FormulaKind { Atom, Equal, Bottom, And, Or, Implies, Forall, Exists };

class Formula {
public:
    Formula();  // ⊥

    static Formula atom(std::string pred, std::vector<Term> args = {});
    static Formula equal(Term lhs, Term rhs);
    static Formula bottom();
    static Formula top();
    static Formula conj(Formula l, Formula r);
    static Formula disj(Formula l, Formula r);
    static Formula implies(Formula l, Formula r);
    static Formula neg(Formula f) { return implies(std::move(f), bottom()); }
    static Formula not_equal(Term lhs, Term rhs) { return neg(equal(std::move(lhs), std::move(rhs))); }
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);
    static Formula forall(const std::vector<std::string>& vars, Formula body);
    static Formula exists(const std::vector<std::string>& vars, Formula body);
    // Left-associated; empty conjunction is ⊤, empty disjunction is ⊥.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);

    FormulaKind kind() const;
    bool is_atom() const { return kind() == FormulaKind::Atom; }
    bool is_bottom() const { return kind() == FormulaKind::Bottom; }
    bool is_quantifier() const { return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists; }
    bool is_negation() const;
    bool is_top() const;

    const std::string& pred() const;
    const std::vector<Term>& args() const;
    const Term& lhs() const;
    const Term& rhs() const;
    const Formula& left() const;
    const Formula& right() const;
    const std::string& var() const;
    const Formula& body() const;

    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }
    std::size_t node_count() const;

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend int compare(const Formula& a, const Formula& b);
};

int compare(const Formula& a, const Formula& b);
struct FormulaLess {
    bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};

struct Symbol {
    std::string name;
    int arity = 0;
    bool operator==(const Symbol&) const = default;
    auto operator<=>(const Symbol&) const = default;
};

// Predicates and functions kept in order of first occurrence.
class Signature {
public:
    void add_predicate(const std::string& name, int arity);
    void add_function(const std::string& name, int arity);
    void merge(const Signature& o);

    const std::vector<Symbol>& predicates() const { return preds_; }
    const std::vector<Symbol>& functions() const { return fns_; }
    std::optional<int> predicate_arity(const std::string& name) const;
    std::optional<int> function_arity(const std::string& name) const;
    std::vector<std::string> object_constants() const;
    bool has_positive_arity_functions() const;
    int max_predicate_arity() const;

private:
    std::vector<Symbol> preds_;
    std::vector<Symbol> fns_;
};

Signature signature_of(const Formula& f);
void collect_signature(const Formula& f, Signature& sig);
void collect_signature(const Term& t, Signature& sig);

class Substitution {
public:
    Substitution() = default;
    explicit Substitution(std::map<std::string, Term> m) : map_(std::move(m)) {}

    void bind(const std::string& var, Term t) { map_[var] = std::move(t); }
    const Term* lookup(const std::string& var) const;
    bool contains(const std::string& var) const { return map_.count(var) > 0; }
    bool empty() const { return map_.empty(); }
    const std::map<std::string, Term>& map() const { return map_; }

    Term apply(const Term& t) const;
    std::vector<Term> apply(const std::vector<Term>& ts) const;
    // Capture-avoiding application to free occurrences.
    Formula apply(const Formula& f) const;
    // (this ∘ other): apply this, then other.
    Substitution then(const Substitution& other) const;

    bool operator==(const Substitution& o) const { return map_ == o.map_; }

private:
    std::map<std::string, Term> map_;
};

enum class RuleKind { Nondisjunctive, Disjunctive, Quantifier };

// head: disjuncts (empty = constraint); body: conjuncts (empty = fact).
struct Rule {
    std::vector<Formula> head;
    std::vector<Formula> body;
    RuleKind kind = RuleKind::Nondisjunctive;

    Formula head_formula() const { return Formula::disj_all(head); }
    Formula body_formula() const { return Formula::conj_all(body); }
};

// Every predicate occurrence lies in the antecedent of an implication.
bool is_negative(const Formula& f);

RuleKind classify_rule(const std::vector<Formula>& head, const std::vector<Formula>& body);
Rule make_rule(std::vector<Formula> head, std::vector<Formula> body);

struct Program {
    std::vector<Rule> rules;
    std::optional<std::vector<Symbol>> intensional;
    std::vector<Symbol> extensional;
    std::optional<int> universe_hint;
    std::vector<Formula> queries;

    Signature signature() const;
    // Effective intensional predicate list.
    std::vector<Symbol> intensional_predicates() const;
    RuleKind kind() const;
};

// Variables.
std::vector<std::string> free_vars(const Formula& f);  // first-occurrence order
std::vector<std::string> vars_of(const Term& t);
std::vector<std::string> vars_of(const std::vector<Term>& ts);
void collect_vars(const Term& t, std::vector<std::string>& out);
std::set<std::string> all_var_names(const Formula& f);  // bound and free
bool occurs_in(const std::string& var, const Term& t);
Formula universal_closure(const Formula& f);

// Fresh variable names from the reserved namespace _v1, _v2, ...
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}
    void reserve(const std::string& n) { used_.insert(n); }
    void reserve_all(const std::set<std::string>& ns) { used_.insert(ns.begin(), ns.end()); }
    std::string fresh();

private:
    std::set<std::string> used_;
    int next_ = 1;
};

bool is_reserved_name(const std::string& v);

// Structural equality modulo consistent renaming of all variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

// Constant folding of ⊤/⊥ and reflexive equalities.
Formula simplify(const Formula& f);

// t = t' (componentwise conjunction) and its negation.
Formula tuple_equal(const std::vector<Term>& a, const std::vector<Term>& b);
Formula tuple_not_equal(const std::vector<Term>& a, const std::vector<Term>& b);

}  // namespace sloop
