#include <sstream>

#include "sloop/parser.hpp"

namespace sloop {

std::string to_string(const Term& t) {
    if (t.is_var()) return t.name();
    if (t.is_name()) return "@" + std::to_string(t.element());
    if (t.args().empty()) return t.name();
    std::string s = t.name() + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ",";
        s += to_string(t.args()[i]);
    }
    return s + ")";
}

namespace {

// Binding strength: 0 quantifier, 1 ->, 2 |, 3 &, 4 not, 5 atomic.
std::string print(const Formula& f, int ctx);

std::string wrap(const std::string& s, int level, int ctx) { return level < ctx ? "(" + s + ")" : s; }

std::string print(const Formula& f, int ctx) {
    switch (f.kind()) {
        case FormulaKind::Atom: {
            if (f.args().empty()) return f.pred();
            std::string s = f.pred() + "(";
            for (std::size_t i = 0; i < f.args().size(); ++i) {
                if (i) s += ",";
                s += to_string(f.args()[i]);
            }
            return s + ")";
        }
        case FormulaKind::Equal: return to_string(f.lhs()) + " = " + to_string(f.rhs());
        case FormulaKind::Bottom: return "#false";
        case FormulaKind::And: return wrap(print(f.left(), 3) + " & " + print(f.right(), 4), 3, ctx);
        case FormulaKind::Or: return wrap(print(f.left(), 2) + " | " + print(f.right(), 3), 2, ctx);
        case FormulaKind::Implies:
            if (f.is_top()) return "#true";
            if (f.is_negation()) {
                if (f.left().kind() == FormulaKind::Equal)
                    return to_string(f.left().lhs()) + " != " + to_string(f.left().rhs());
                return wrap("not " + print(f.left(), 4), 4, ctx);
            }
            return wrap(print(f.left(), 2) + " -> " + print(f.right(), 1), 1, ctx);
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            std::string s = f.kind() == FormulaKind::Forall ? "forall" : "exists";
            Formula b = f;
            while (b.kind() == f.kind()) {
                s += " " + b.var();
                b = b.body();
            }
            return wrap(s + " (" + print(b, 0) + ")", 0, ctx);
        }
    }
    return "?";
}

}  // namespace

std::string to_string(const Formula& f) { return print(f, 0); }

std::string to_string(const Rule& r) {
    std::string s;
    for (std::size_t i = 0; i < r.head.size(); ++i) {
        if (i) s += " ; ";
        s += print(r.head[i], 0);
    }
    if (!r.body.empty()) {
        s += r.head.empty() ? ":- " : " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i) s += ", ";
            s += print(r.body[i], 0);
        }
    }
    return s + ".";
}

std::string to_string(const Program& p) {
    std::ostringstream os;
    auto syms = [&](const std::vector<Symbol>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : " ") << v[i].name << "/" << v[i].arity;
    };
    if (p.intensional) {
        os << "#intensional";
        syms(*p.intensional);
        os << ".\n";
    }
    if (!p.extensional.empty()) {
        os << "#extensional";
        syms(p.extensional);
        os << ".\n";
    }
    if (p.universe_hint) os << "#universe " << *p.universe_hint << ".\n";
    for (const auto& r : p.rules) os << to_string(r) << "\n";
    for (const auto& q : p.queries) os << "#query " << to_string(q) << ".\n";
    return os.str();
}

namespace {
std::string tuple_text(const Interpretation& I, const std::vector<int>& t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) s += ",";
        s += I.universe()[static_cast<std::size_t>(t[k])];
    }
    return s + ")";
}
}  // namespace

std::string to_string(const Interpretation& I) {
    std::ostringstream os;
    os << "universe";
    for (const auto& e : I.universe()) os << " " << e;
    os << ".\n";
    for (const auto& [c, e] : I.constants()) os << "const " << c << " = " << I.universe()[static_cast<std::size_t>(e)] << ".\n";
    for (const auto& [f, table] : I.functions()) {
        for (std::size_t idx = 0; idx < table.values.size(); ++idx) {
            auto t = I.tuple_at(table.arity, idx);
            os << "fn " << f;
            if (table.arity > 0) {
                std::string tt = tuple_text(I, t);
                os << tt;
            }
            os << " = " << I.universe()[static_cast<std::size_t>(table.values[idx])] << ".\n";
        }
    }
    for (const auto& [p, table] : I.predicates()) {
        std::vector<std::string> tuples;
        for (std::size_t idx = 0; idx < table.bits.size(); ++idx)
            if (table.bits[idx]) tuples.push_back(tuple_text(I, I.tuple_at(table.arity, idx)));
        os << "pred " << p << "/" << table.arity << " = {";
        for (std::size_t k = 0; k < tuples.size(); ++k) os << (k ? ", " : " ") << tuples[k];
        os << (tuples.empty() ? "}" : " }") << ".\n";
    }
    return os.str();
}

std::string to_compact_string(const Interpretation& I) {
    std::string s;
    for (const auto& [p, table] : I.predicates()) {
        if (!s.empty()) s += ", ";
        s += p + "={";
        bool first = true;
        for (std::size_t idx = 0; idx < table.bits.size(); ++idx) {
            if (!table.bits[idx]) continue;
            if (!first) s += ", ";
            first = false;
            s += tuple_text(I, I.tuple_at(table.arity, idx));
        }
        s += "}";
    }
    return s;
}

}  // namespace sloop
