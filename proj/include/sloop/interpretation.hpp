#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sloop {

// A finite structure whose elements are all named (universe[i] is the name of element i).
class Interpretation {
public:
    struct FunctionTable {
        int arity = 0;
        std::vector<int> values;  // indexed by tuple_index
        bool operator==(const FunctionTable&) const = default;
    };
    struct PredicateTable {
        int arity = 0;
        std::vector<std::uint8_t> bits;  // indexed by tuple_index
        bool operator==(const PredicateTable&) const = default;
    };

    Interpretation() = default;
    explicit Interpretation(std::vector<std::string> universe);

    std::size_t size() const { return universe_.size(); }
    const std::vector<std::string>& universe() const { return universe_; }
    std::optional<int> element_index(const std::string& name) const;

    void set_constant(const std::string& name, int element);
    std::optional<int> constant(const std::string& name) const;
    const std::map<std::string, int>& constants() const { return constants_; }

    void set_function(const std::string& name, int arity, std::vector<int> values);
    const std::map<std::string, FunctionTable>& functions() const { return functions_; }
    int apply_function(const std::string& name, const std::vector<int>& args) const;

    void declare_predicate(const std::string& name, int arity);
    void set_atom(const std::string& name, const std::vector<int>& tuple, bool value = true);
    bool holds(const std::string& name, const std::vector<int>& tuple) const;
    const std::map<std::string, PredicateTable>& predicates() const { return predicates_; }
    PredicateTable* predicate_table(const std::string& name);

    std::size_t tuple_count(int arity) const;
    std::size_t tuple_index(const std::vector<int>& tuple) const;
    std::vector<int> tuple_at(int arity, std::size_t index) const;

    bool operator==(const Interpretation& o) const = default;

private:
    std::vector<std::string> universe_;
    std::map<std::string, int> constants_;
    std::map<std::string, FunctionTable> functions_;
    std::map<std::string, PredicateTable> predicates_;
};

// Clark's equational theory on a finite structure: distinct constants denote
// distinct elements and no function of positive arity exists.
bool cet_check(const Interpretation& i);

}  // namespace sloop
