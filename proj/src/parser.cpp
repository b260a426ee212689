#include "sloop/parser.hpp"

#include <cctype>
#include <cstdio>
#include <map>

namespace sloop {

namespace {

enum class Tok {
    Lower,     // constant / function / predicate / element name
    Upper,     // variable
    Int,
    Directive, // #name
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Comma, Semicolon, Dot, If, Arrow, Bar, Amp, Eq, Neq, Slash,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

struct Utf8Sym {
    const char* utf8;
    const char* ascii;
};

// Unicode connectives mapped to their ASCII spelling.
const Utf8Sym kUnicode[] = {
    {"\xE2\x86\x90", ":-"},  // ←
    {"\xC2\xAC", " not "},   // ¬
    {"\xE2\x88\xA7", "&"},   // ∧
    {"\xE2\x88\xA8", "|"},   // ∨
    {"\xE2\x86\x92", "->"},  // →
    {"\xE2\x88\x80", " forall "},
    {"\xE2\x88\x83", " exists "},
    {"\xE2\x89\xA0", "!="},
    {"\xE2\x8A\xA5", "#false"},
    {"\xE2\x8A\xA4", "#true"},
};

class Lexer {
public:
    Lexer(std::string_view text, std::string filename) : src_(normalize(text)), file_(std::move(filename)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t{Tok::End, "", line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string id = ident();
                t.text = id;
                t.kind = (std::isupper(static_cast<unsigned char>(id[0])) || id[0] == '_') ? Tok::Upper : Tok::Lower;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
                t.kind = Tok::Int;
            } else if (c == '#') {
                advance();
                t.text = ident();
                if (t.text.empty()) fail(t, "expected directive name after '#'");
                t.kind = Tok::Directive;
            } else {
                t.kind = punct(t);
            }
            out.push_back(t);
        }
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw Error(ErrorKind::Parse, file_ + ":" + std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
    }

private:
    static std::string normalize(std::string_view text) {
        std::string out;
        for (std::size_t i = 0; i < text.size();) {
            unsigned char c = static_cast<unsigned char>(text[i]);
            if (c < 0x80) {
                out += static_cast<char>(c);
                ++i;
                continue;
            }
            bool mapped = false;
            for (const auto& u : kUnicode) {
                std::string_view s(u.utf8);
                if (text.substr(i, s.size()) == s) {
                    out += u.ascii;
                    i += s.size();
                    mapped = true;
                    break;
                }
            }
            if (mapped) continue;
            // Other code points become ASCII identifier fragments.
            unsigned cp = 0;
            std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
            cp = len == 1 ? c : (c & (0xFF >> (len + 1)));
            for (std::size_t k = 1; k < len && i + k < text.size(); ++k)
                cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
            char buf[16];
            std::snprintf(buf, sizeof buf, "u%04x", cp);
            out += buf;
            i += len;
        }
        return out;
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string ident() {
        std::string s;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            s += advance();
        return s;
    }

    Tok punct(const Token& t) {
        char c = advance();
        auto next_is = [&](char d) {
            if (pos_ < src_.size() && src_[pos_] == d) {
                advance();
                return true;
            }
            return false;
        };
        switch (c) {
            case '(': return Tok::LParen;
            case ')': return Tok::RParen;
            case '[': return Tok::LBracket;
            case ']': return Tok::RBracket;
            case '{': return Tok::LBrace;
            case '}': return Tok::RBrace;
            case ',': return Tok::Comma;
            case ';': return Tok::Semicolon;
            case '.': return Tok::Dot;
            case '|': return Tok::Bar;
            case '&': return Tok::Amp;
            case '=': return Tok::Eq;
            case '/': return Tok::Slash;
            case ':':
                if (next_is('-')) return Tok::If;
                break;
            case '-':
                if (next_is('>')) return Tok::Arrow;
                break;
            case '!':
                if (next_is('=')) return Tok::Neq;
                break;
            default: break;
        }
        fail(t, std::string("unexpected character '") + c + "'");
    }

    std::string src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts) : lex_(text, opts.filename), opts_(opts) {
        toks_ = lex_.run();
    }

    Program program() {
        Program p;
        while (!at(Tok::End)) statement(p);
        try {
            p.signature();
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, opts_.filename + ": arity clash: " + e.what());
        }
        return p;
    }

    Formula standalone_formula() {
        Formula f = formula();
        accept(Tok::Dot);
        expect(Tok::End, "end of input");
        try {
            signature_of(f);
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, opts_.filename + ": arity clash: " + e.what());
        }
        return f;
    }

    Interpretation interpretation();

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_word(const char* w) const { return peek().kind == Tok::Lower && peek().text == w; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        take();
        return true;
    }
    Token expect(Tok k, const char* what) {
        if (!at(k)) lex_.fail(peek(), std::string("expected ") + what + ", found '" + describe(peek()) + "'");
        return take();
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::End: return "end of input";
            case Tok::Directive: return "#" + t.text;
            case Tok::LParen: return "(";
            case Tok::RParen: return ")";
            case Tok::LBracket: return "[";
            case Tok::RBracket: return "]";
            case Tok::LBrace: return "{";
            case Tok::RBrace: return "}";
            case Tok::Comma: return ",";
            case Tok::Semicolon: return ";";
            case Tok::Dot: return ".";
            case Tok::If: return ":-";
            case Tok::Arrow: return "->";
            case Tok::Bar: return "|";
            case Tok::Amp: return "&";
            case Tok::Eq: return "=";
            case Tok::Neq: return "!=";
            case Tok::Slash: return "/";
            default: return t.text;
        }
    }

    static bool is_keyword(const std::string& s) { return s == "not" || s == "forall" || s == "exists"; }

    std::string variable() {
        Token t = expect(Tok::Upper, "variable");
        check_var(t);
        return t.text;
    }

    void check_var(const Token& t) {
        if (is_reserved_name(t.text) && !opts_.allow_reserved)
            lex_.fail(t, "variable name '" + t.text + "' is reserved for generated variables");
    }

    // ---- statements

    void statement(Program& p) {
        if (at(Tok::Directive)) {
            directive(p);
            return;
        }
        Token start = peek();
        std::vector<Formula> head, body;
        if (!at(Tok::If)) {
            head.push_back(formula());
            while (accept(Tok::Semicolon)) head.push_back(formula());
        }
        if (accept(Tok::If)) {
            body.push_back(formula());
            while (accept(Tok::Comma)) body.push_back(formula());
        }
        expect(Tok::Dot, "'.' at end of rule");
        if (head.empty() && body.empty()) lex_.fail(start, "empty rule");
        Rule r = make_rule(std::move(head), std::move(body));
        if (r.kind == RuleKind::Quantifier) {
            for (const auto& f : r.head) check_implications(f, false, start);
            for (const auto& f : r.body) check_implications(f, false, start);
        }
        p.rules.push_back(std::move(r));
    }

    void check_implications(const Formula& f, bool inside_negative, const Token& where) {
        if (!inside_negative && is_negative(f)) inside_negative = true;
        switch (f.kind()) {
            case FormulaKind::Atom:
            case FormulaKind::Equal:
            case FormulaKind::Bottom: return;
            case FormulaKind::Forall:
            case FormulaKind::Exists: check_implications(f.body(), inside_negative, where); return;
            case FormulaKind::Implies:
                if (!inside_negative) lex_.fail(where, "implication not inside negative formula");
                [[fallthrough]];
            default:
                check_implications(f.left(), inside_negative, where);
                check_implications(f.right(), inside_negative, where);
        }
    }

    Symbol pred_spec() {
        Token name = expect(Tok::Lower, "predicate name");
        expect(Tok::Slash, "'/'");
        Token ar = expect(Tok::Int, "arity");
        return Symbol{name.text, std::stoi(ar.text)};
    }

    void directive(Program& p) {
        Token d = take();
        if (d.text == "intensional" || d.text == "extensional") {
            std::vector<Symbol> syms{pred_spec()};
            while (accept(Tok::Comma)) syms.push_back(pred_spec());
            if (d.text == "intensional") {
                if (!p.intensional) p.intensional.emplace();
                p.intensional->insert(p.intensional->end(), syms.begin(), syms.end());
            } else {
                p.extensional.insert(p.extensional.end(), syms.begin(), syms.end());
            }
        } else if (d.text == "universe") {
            Token n = expect(Tok::Int, "universe size");
            int v = std::stoi(n.text);
            if (v < 1) lex_.fail(n, "universe size must be positive");
            p.universe_hint = v;
        } else if (d.text == "query") {
            p.queries.push_back(formula());
        } else {
            lex_.fail(d, "unknown directive '#" + d.text + "'");
        }
        expect(Tok::Dot, "'.' after directive");
    }

    // ---- formulas

    Formula formula() {
        Formula l = disjunction();
        if (accept(Tok::Arrow)) return Formula::implies(l, formula());
        return l;
    }

    Formula disjunction() {
        Formula l = conjunction();
        while (accept(Tok::Bar)) l = Formula::disj(l, conjunction());
        return l;
    }

    Formula conjunction() {
        Formula l = unary();
        while (accept(Tok::Amp)) l = Formula::conj(l, unary());
        return l;
    }

    Formula unary() {
        if (at_word("not")) {
            take();
            return Formula::neg(unary());
        }
        if (at_word("forall") || at_word("exists")) {
            bool all = peek().text == "forall";
            take();
            std::vector<std::string> vars{variable()};
            while (at(Tok::Upper)) vars.push_back(variable());
            Formula body = formula();
            return all ? Formula::forall(vars, body) : Formula::exists(vars, body);
        }
        return primary();
    }

    Formula primary() {
        if (accept(Tok::LParen)) {
            Formula f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Directive) && (peek().text == "true" || peek().text == "false")) {
            bool t = take().text == "true";
            return t ? Formula::top() : Formula::bottom();
        }
        Token start = peek();
        if (start.kind == Tok::Lower && is_keyword(start.text)) lex_.fail(start, "unexpected keyword '" + start.text + "'");
        Term t = term();
        if (accept(Tok::Eq)) return Formula::equal(t, term());
        if (accept(Tok::Neq)) return Formula::not_equal(t, term());
        if (!t.is_fn() || start.kind != Tok::Lower) lex_.fail(start, "expected an atom or an equality");
        return Formula::atom(t.name(), t.args());
    }

    Term term() {
        Token t = peek();
        switch (t.kind) {
            case Tok::Upper:
                take();
                check_var(t);
                return Term::var(t.text);
            case Tok::Int: take(); return Term::constant(t.text);
            case Tok::Lower: {
                if (is_keyword(t.text)) lex_.fail(t, "unexpected keyword '" + t.text + "'");
                take();
                std::vector<Term> args;
                if (accept(Tok::LParen)) {
                    args.push_back(term());
                    while (accept(Tok::Comma)) args.push_back(term());
                    expect(Tok::RParen, "')'");
                }
                return Term::fn(t.text, std::move(args));
            }
            case Tok::LBracket: {
                take();
                if (accept(Tok::RBracket)) return Term::constant("nil");
                std::vector<Term> items{term()};
                while (accept(Tok::Comma)) items.push_back(term());
                Term tail = Term::constant("nil");
                if (accept(Tok::Bar)) tail = term();
                expect(Tok::RBracket, "']'");
                for (auto it = items.rbegin(); it != items.rend(); ++it) tail = Term::fn("cons", {*it, tail});
                return tail;
            }
            default: lex_.fail(t, "expected a term, found '" + describe(t) + "'");
        }
    }

    Lexer lex_;
    ParseOptions opts_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

Interpretation Parser::interpretation() {
    auto element_token = [&]() -> Token {
        if (at(Tok::Lower) || at(Tok::Upper) || at(Tok::Int)) return take();
        lex_.fail(peek(), "expected an element name");
    };
    if (!at_word("universe")) lex_.fail(peek(), "interpretation must start with 'universe'");
    take();
    std::vector<std::string> names;
    while (!at(Tok::Dot)) {
        Token e = element_token();
        for (const auto& n : names)
            if (n == e.text) lex_.fail(e, "duplicate element '" + e.text + "'");
        names.push_back(e.text);
    }
    take();
    if (names.empty()) lex_.fail(peek(), "universe must be nonempty");
    Interpretation I(names);
    auto element = [&]() {
        Token e = element_token();
        auto idx = I.element_index(e.text);
        if (!idx) lex_.fail(e, "element '" + e.text + "' not declared");
        return *idx;
    };
    std::map<std::string, std::pair<int, std::vector<int>>> fns;  // arity, values (-1 = missing)
    std::map<std::string, Token> fn_where;
    while (!at(Tok::End)) {
        Token kw = expect(Tok::Lower, "'const', 'fn' or 'pred'");
        if (kw.text == "const") {
            Token c = expect(Tok::Lower, "constant name");
            expect(Tok::Eq, "'='");
            I.set_constant(c.text, element());
        } else if (kw.text == "fn") {
            Token f = expect(Tok::Lower, "function name");
            std::vector<int> args;
            expect(Tok::LParen, "'('");
            args.push_back(element());
            while (accept(Tok::Comma)) args.push_back(element());
            expect(Tok::RParen, "')'");
            expect(Tok::Eq, "'='");
            int v = element();
            auto it = fns.find(f.text);
            if (it == fns.end()) {
                it = fns.emplace(f.text, std::make_pair(static_cast<int>(args.size()),
                                                        std::vector<int>(I.tuple_count(static_cast<int>(args.size())), -1)))
                         .first;
                fn_where.emplace(f.text, f);
            } else if (it->second.first != static_cast<int>(args.size())) {
                lex_.fail(f, "arity clash for function '" + f.text + "'");
            }
            it->second.second[I.tuple_index(args)] = v;
        } else if (kw.text == "pred") {
            Token p = expect(Tok::Lower, "predicate name");
            std::optional<int> arity;
            if (accept(Tok::Slash)) arity = std::stoi(expect(Tok::Int, "arity").text);
            expect(Tok::Eq, "'='");
            expect(Tok::LBrace, "'{'");
            std::vector<std::vector<int>> tuples;
            if (!at(Tok::RBrace)) {
                do {
                    std::vector<int> tup;
                    if (accept(Tok::LParen)) {
                        if (!at(Tok::RParen)) {
                            tup.push_back(element());
                            while (accept(Tok::Comma)) tup.push_back(element());
                        }
                        expect(Tok::RParen, "')'");
                    } else {
                        tup.push_back(element());
                    }
                    tuples.push_back(std::move(tup));
                } while (accept(Tok::Comma));
            }
            expect(Tok::RBrace, "'}'");
            try {
                if (arity) I.declare_predicate(p.text, *arity);
                for (const auto& t : tuples) {
                    if (arity && static_cast<int>(t.size()) != *arity) throw Error(ErrorKind::Signature, "");
                    I.set_atom(p.text, t);
                }
            } catch (const Error&) {
                lex_.fail(p, "arity clash for predicate '" + p.text + "'");
            }
        } else {
            lex_.fail(kw, "expected 'const', 'fn' or 'pred'");
        }
        expect(Tok::Dot, "'.'");
    }
    for (auto& [name, fv] : fns) {
        for (int v : fv.second)
            if (v < 0) lex_.fail(fn_where.at(name), "function table for '" + name + "' is not total");
        I.set_function(name, fv.first, fv.second);
    }
    return I;
}

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).program(); }

Formula parse_formula(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).standalone_formula();
}

Interpretation parse_interpretation(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).interpretation();
}

}  // namespace sloop
