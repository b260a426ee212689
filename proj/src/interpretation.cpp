#include "sloop/interpretation.hpp"

#include "sloop/syntax.hpp"

namespace sloop {

Interpretation::Interpretation(std::vector<std::string> universe) : universe_(std::move(universe)) {
    if (universe_.empty()) throw Error(ErrorKind::InvalidArgument, "universe must be nonempty");
}

std::optional<int> Interpretation::element_index(const std::string& name) const {
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (universe_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

void Interpretation::set_constant(const std::string& name, int element) {
    if (element < 0 || static_cast<std::size_t>(element) >= size())
        throw Error(ErrorKind::InvalidArgument, "constant '" + name + "' mapped outside the universe");
    constants_[name] = element;
}

std::optional<int> Interpretation::constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) return std::nullopt;
    return it->second;
}

void Interpretation::set_function(const std::string& name, int arity, std::vector<int> values) {
    if (values.size() != tuple_count(arity))
        throw Error(ErrorKind::InvalidArgument, "function table for '" + name + "' is not total");
    functions_[name] = FunctionTable{arity, std::move(values)};
}

int Interpretation::apply_function(const std::string& name, const std::vector<int>& args) const {
    if (args.empty()) {
        auto c = constant(name);
        if (!c) throw Error(ErrorKind::InvalidArgument, "constant '" + name + "' has no denotation");
        return *c;
    }
    auto it = functions_.find(name);
    if (it == functions_.end() || it->second.arity != static_cast<int>(args.size()))
        throw Error(ErrorKind::InvalidArgument, "function '" + name + "' has no table");
    return it->second.values[tuple_index(args)];
}

void Interpretation::declare_predicate(const std::string& name, int arity) {
    auto it = predicates_.find(name);
    if (it != predicates_.end()) {
        if (it->second.arity != arity)
            throw Error(ErrorKind::Signature, "predicate '" + name + "' used with two arities");
        return;
    }
    predicates_[name] = PredicateTable{arity, std::vector<std::uint8_t>(tuple_count(arity), 0)};
}

void Interpretation::set_atom(const std::string& name, const std::vector<int>& tuple, bool value) {
    declare_predicate(name, static_cast<int>(tuple.size()));
    predicates_[name].bits[tuple_index(tuple)] = value ? 1 : 0;
}

bool Interpretation::holds(const std::string& name, const std::vector<int>& tuple) const {
    auto it = predicates_.find(name);
    if (it == predicates_.end()) return false;
    if (it->second.arity != static_cast<int>(tuple.size()))
        throw Error(ErrorKind::Signature, "predicate '" + name + "' used with two arities");
    return it->second.bits[tuple_index(tuple)] != 0;
}

Interpretation::PredicateTable* Interpretation::predicate_table(const std::string& name) {
    auto it = predicates_.find(name);
    return it == predicates_.end() ? nullptr : &it->second;
}

std::size_t Interpretation::tuple_count(int arity) const {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) n *= size();
    return n;
}

std::size_t Interpretation::tuple_index(const std::vector<int>& tuple) const {
    std::size_t idx = 0;
    for (int e : tuple) idx = idx * size() + static_cast<std::size_t>(e);
    return idx;
}

std::vector<int> Interpretation::tuple_at(int arity, std::size_t index) const {
    std::vector<int> t(static_cast<std::size_t>(arity));
    for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<std::size_t>(i)] = static_cast<int>(index % size());
        index /= size();
    }
    return t;
}

bool cet_check(const Interpretation& i) {
    for (const auto& [name, table] : i.functions())
        if (table.arity > 0) return false;
    std::vector<int> seen;
    for (const auto& [name, e] : i.constants()) {
        for (int s : seen)
            if (s == e) return false;
        seen.push_back(e);
    }
    return true;
}

}  // namespace sloop
