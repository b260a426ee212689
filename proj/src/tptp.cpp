#include "sloop/tptp.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sloop/transform.hpp"

namespace sloop {

std::string tptp_lower_word(const std::string& s) {
    std::string out;
    for (char ch : s) {
        auto c = static_cast<unsigned char>(ch);
        out += (std::isalnum(c) || ch == '_') && c < 128 ? ch : '_';
    }
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0])))
        out = "s_" + out;
    else
        out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
    return out;
}

namespace {

std::string upper_word(const std::string& v) {
    std::size_t start = v.find_first_not_of('_');
    std::string out;
    for (std::size_t i = start == std::string::npos ? v.size() : start; i < v.size(); ++i) {
        auto c = static_cast<unsigned char>(v[i]);
        out += (std::isalnum(c) || v[i] == '_') && c < 128 ? v[i] : '_';
    }
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) return "X" + out;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string take(std::set<std::string>& used, const std::string& base) {
    std::string name = base;
    for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
    used.insert(name);
    return name;
}

// Symbol keys: (is_predicate, name, arity).
using SymbolKey = std::tuple<bool, std::string, int>;

class Emitter {
public:
    explicit Emitter(const TptpProblem& p) {
        auto visit = [&](const Formula& f) { collect(f); };
        for (const auto& [n, f] : p.axioms) visit(f);
        if (p.conjecture) visit(p.conjecture->second);
    }

    std::string formula(const Formula& f) {
        vars_.clear();
        used_vars_.clear();
        return emit(universal_closure(f), true);
    }

private:
    void collect_term(const Term& t) {
        if (t.is_name()) throw Error(ErrorKind::InvalidArgument, "object names cannot be written as TPTP");
        if (!t.is_fn()) return;
        add({false, t.name(), static_cast<int>(t.args().size())});
        for (const auto& a : t.args()) collect_term(a);
    }

    void collect(const Formula& f) {
        switch (f.kind()) {
        case FormulaKind::Atom:
            add({true, f.pred(), static_cast<int>(f.args().size())});
            for (const auto& a : f.args()) collect_term(a);
            break;
        case FormulaKind::Equal:
            collect_term(f.lhs());
            collect_term(f.rhs());
            break;
        case FormulaKind::Bottom: break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            collect(f.left());
            collect(f.right());
            break;
        case FormulaKind::Forall:
        case FormulaKind::Exists: collect(f.body()); break;
        }
    }

    void add(const SymbolKey& k) {
        if (symbols_.count(k)) return;
        symbols_[k] = take(used_symbols_, tptp_lower_word(std::get<1>(k)));
    }

    std::string var(const std::string& v) {
        auto it = vars_.find(v);
        if (it != vars_.end()) return it->second;
        return vars_[v] = take(used_vars_, upper_word(v));
    }

    std::string term(const Term& t) {
        if (t.is_var()) return var(t.name());
        std::string s = symbols_.at({false, t.name(), static_cast<int>(t.args().size())});
        if (t.args().empty()) return s;
        s += "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) s += (i ? "," : "") + term(t.args()[i]);
        return s + ")";
    }

    // `bare`: no enclosing connective, so infix equality needs no parentheses.
    std::string emit(const Formula& f, bool bare) {
        if (f.is_top()) return "$true";
        switch (f.kind()) {
        case FormulaKind::Atom: {
            std::string s = symbols_.at({true, f.pred(), static_cast<int>(f.args().size())});
            if (f.args().empty()) return s;
            s += "(";
            for (std::size_t i = 0; i < f.args().size(); ++i) s += (i ? "," : "") + term(f.args()[i]);
            return s + ")";
        }
        case FormulaKind::Equal: {
            std::string s = term(f.lhs()) + " = " + term(f.rhs());
            return bare ? s : "(" + s + ")";
        }
        case FormulaKind::Bottom: return "$false";
        case FormulaKind::Implies:
            if (f.right().is_bottom() && f.left().kind() == FormulaKind::Equal) {
                std::string s = term(f.left().lhs()) + " != " + term(f.left().rhs());
                return bare ? s : "(" + s + ")";
            }
            return "(" + emit(f.left(), false) + " => " + emit(f.right(), false) + ")";
        case FormulaKind::And: return "(" + emit(f.left(), false) + " & " + emit(f.right(), false) + ")";
        case FormulaKind::Or: return "(" + emit(f.left(), false) + " | " + emit(f.right(), false) + ")";
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            // Shadowed names get a fresh spelling for the inner scope.
            std::vector<std::pair<std::string, std::optional<std::string>>> saved;
            std::vector<std::string> names;
            const Formula* cur = &f;
            while (cur->kind() == f.kind()) {
                auto it = vars_.find(cur->var());
                saved.emplace_back(cur->var(), it == vars_.end() ? std::nullopt : std::optional(it->second));
                if (it != vars_.end()) vars_.erase(it);
                names.push_back(var(cur->var()));
                cur = &cur->body();
            }
            std::string s = (f.kind() == FormulaKind::Forall ? "![" : "?[");
            for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
            s += "]: " + emit(*cur, false);
            for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
                if (it->second)
                    vars_[it->first] = *it->second;
                else
                    vars_.erase(it->first);
            }
            return s;
        }
        }
        return "$false";
    }

    std::map<SymbolKey, std::string> symbols_;
    std::set<std::string> used_symbols_;
    std::map<std::string, std::string> vars_;
    std::set<std::string> used_vars_;
};

// ------------------------------------------------------------------ reader

struct Token {
    enum Kind { Lower, Upper, Dollar, Punct, End } kind = End;
    std::string text;
    int line = 1;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        auto word = [&](std::size_t from) {
            std::size_t j = from;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            return j;
        };
        if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)) || c == '$') {
            std::size_t j = word(i + 1);
            Token::Kind k = c == '$' ? Token::Dollar : std::islower(static_cast<unsigned char>(c)) ? Token::Lower : Token::Upper;
            out.push_back({k, s.substr(i, j - i), line});
            i = j;
            continue;
        }
        static const char* multi[] = {"<=>", "=>", "!="};
        bool matched = false;
        for (const char* m : multi) {
            std::string ms(m);
            if (s.compare(i, ms.size(), ms) == 0) {
                out.push_back({Token::Punct, ms, line});
                i += ms.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("()[],:.!?~&|=").find(c) == std::string::npos)
            throw Error(ErrorKind::Parse, "TPTP line " + std::to_string(line) + ": unexpected character '" + std::string(1, c) + "'");
        out.push_back({Token::Punct, std::string(1, c), line});
        ++i;
    }
    out.push_back({Token::End, "", line});
    return out;
}

class Reader {
public:
    explicit Reader(const std::string& text) : toks_(tokenize(text)) {}

    TptpProblem problem() {
        TptpProblem p;
        std::set<std::string> names;
        while (peek().kind != Token::End) {
            expect_word("fof");
            expect("(");
            Token name = next();
            if (name.kind != Token::Lower) fail("annotated formula name expected");
            if (!names.insert(name.text).second) fail("duplicate formula name '" + name.text + "'");
            expect(",");
            Token role = next();
            expect(",");
            Formula f = formula();
            expect(")");
            expect(".");
            if (role.text == "axiom" || role.text == "hypothesis")
                p.axioms.emplace_back(name.text, f);
            else if (role.text == "conjecture") {
                if (p.conjecture) fail("more than one conjecture");
                p.conjecture = std::make_pair(name.text, f);
            } else
                fail("unsupported role '" + role.text + "'");
        }
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::Parse, "TPTP line " + std::to_string(peek().line) + ": " + msg);
    }
    bool at(const std::string& p) const { return peek().kind == Token::Punct && peek().text == p; }
    void expect(const std::string& p) {
        if (!at(p)) fail("expected '" + p + "'");
        ++pos_;
    }
    void expect_word(const std::string& w) {
        if (peek().text != w) fail("expected '" + w + "'");
        ++pos_;
    }

    Formula formula() {
        Formula l = unit();
        if (at("&") || at("|")) {
            std::string op = peek().text;
            while (at(op)) {
                ++pos_;
                Formula r = unit();
                l = op == "&" ? Formula::conj(l, r) : Formula::disj(l, r);
            }
            if (at("&") || at("|") || at("=>") || at("<=>")) fail("mixed connectives need parentheses");
            return l;
        }
        if (at("=>")) {
            ++pos_;
            return Formula::implies(l, unit());
        }
        if (at("<=>")) {
            ++pos_;
            Formula r = unit();
            return Formula::conj(Formula::implies(l, r), Formula::implies(r, l));
        }
        return l;
    }

    Formula unit() {
        if (at("(")) {
            ++pos_;
            Formula f = formula();
            expect(")");
            return f;
        }
        if (at("~")) {
            ++pos_;
            return Formula::neg(unit());
        }
        if (at("!") || at("?")) {
            bool all = peek().text == "!";
            ++pos_;
            expect("[");
            std::vector<std::string> vs;
            do {
                if (!vs.empty()) expect(",");
                Token v = next();
                if (v.kind != Token::Upper) fail("variable expected");
                vs.push_back(v.text);
            } while (at(","));
            expect("]");
            expect(":");
            Formula body = unit();
            return all ? Formula::forall(vs, body) : Formula::exists(vs, body);
        }
        if (peek().kind == Token::Dollar) {
            Token t = next();
            if (t.text == "$true") return Formula::top();
            if (t.text == "$false") return Formula::bottom();
            fail("unknown defined symbol '" + t.text + "'");
        }
        if (peek().kind == Token::Upper) {
            Term l = term();
            return equality(l);
        }
        if (peek().kind != Token::Lower) fail("formula expected");
        Token name = next();
        std::vector<Term> args = arguments();
        if (at("=") || at("!=")) return equality(Term::fn(name.text, args));
        return Formula::atom(name.text, args);
    }

    Formula equality(const Term& l) {
        if (at("=")) {
            ++pos_;
            return Formula::equal(l, term());
        }
        if (at("!=")) {
            ++pos_;
            return Formula::not_equal(l, term());
        }
        fail("'=' or '!=' expected after a term");
    }

    std::vector<Term> arguments() {
        std::vector<Term> args;
        if (!at("(")) return args;
        ++pos_;
        do {
            if (!args.empty()) expect(",");
            args.push_back(term());
        } while (at(","));
        expect(")");
        return args;
    }

    Term term() {
        Token t = next();
        if (t.kind == Token::Upper) return Term::var(t.text);
        if (t.kind != Token::Lower) fail("term expected");
        return Term::fn(t.text, arguments());
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_tptp(const TptpProblem& problem) {
    Emitter em(problem);
    std::set<std::string> used;
    std::ostringstream out;
    auto line = [&](const std::string& name, const char* role, const Formula& f) {
        std::string n = tptp_lower_word(name);
        if (used.count(n)) throw Error(ErrorKind::InvalidArgument, "duplicate TPTP formula name '" + n + "'");
        used.insert(n);
        out << "fof(" << n << ", " << role << ", " << em.formula(f) << ").\n";
    };
    for (const auto& [name, f] : problem.axioms) line(name, "axiom", f);
    if (problem.conjecture) line(problem.conjecture->first, "conjecture", problem.conjecture->second);
    return out.str();
}

TptpProblem parse_tptp(const std::string& text) { return Reader(text).problem(); }

TptpProblem build_entailment_job(const Program& gamma, const LoopFormulaSet& delta, const Formula& query) {
    TptpProblem p;
    std::set<std::string> used;
    auto add = [&](const std::string& base, const Formula& f) { p.axioms.emplace_back(take(used, base), f); };
    for (std::size_t i = 0; i < gamma.rules.size(); ++i) add("rule_" + std::to_string(i + 1), rule_formula(gamma.rules[i]));
    for (const auto& lf : delta.formulas) {
        std::string base = "lf";
        if (lf.loop.empty()) {
            base = tptp_lower_word(lf.label);
        } else {
            std::set<std::string> seen;
            for (const auto& a : lf.loop)
                if (seen.insert(a.pred()).second) base += "_" + tptp_lower_word(a.pred());
        }
        add(base, lf.formula);
    }
    p.conjecture = std::make_pair(std::string("goal"), query);
    return p;
}

std::string to_string(ProverVerdict::Kind k) {
    switch (k) {
    case ProverVerdict::Theorem: return "Theorem";
    case ProverVerdict::CounterSatisfiable: return "CounterSatisfiable";
    case ProverVerdict::Unknown: return "Unknown";
    case ProverVerdict::Timeout: return "Timeout";
    case ProverVerdict::ToolError: return "ToolError";
    }
    return "ToolError";
}

ProverVerdict parse_szs_status(const std::string& output) {
    std::size_t at = output.find("SZS status ");
    if (at == std::string::npos) return {ProverVerdict::ToolError, "no SZS status line in prover output"};
    std::istringstream in(output.substr(at + 11));
    std::string word;
    in >> word;
    static const std::map<std::string, ProverVerdict::Kind> table = {
        {"Theorem", ProverVerdict::Theorem},
        {"Unsatisfiable", ProverVerdict::Theorem},
        {"ContradictoryAxioms", ProverVerdict::Theorem},
        {"CounterSatisfiable", ProverVerdict::CounterSatisfiable},
        {"Satisfiable", ProverVerdict::CounterSatisfiable},
        {"Timeout", ProverVerdict::Timeout},
        {"ResourceOut", ProverVerdict::Timeout},
        {"GaveUp", ProverVerdict::Unknown},
        {"Unknown", ProverVerdict::Unknown},
        {"Incomplete", ProverVerdict::Unknown},
        {"Inappropriate", ProverVerdict::Unknown},
    };
    auto it = table.find(word);
    if (it == table.end()) return {ProverVerdict::ToolError, "unrecognized SZS status '" + word + "'"};
    return {it->second, word};
}

ProverVerdict invoke_prover(const std::string& command_template, const TptpProblem& problem, int timeout_s) {
    if (timeout_s < 1) return {ProverVerdict::ToolError, "timeout must be positive"};
    std::string text;
    try {
        text = to_tptp(problem);
    } catch (const std::exception& e) {
        return {ProverVerdict::ToolError, e.what()};
    }
    std::string dir = std::filesystem::temp_directory_path().string();
    std::string path = dir + "/sloop-XXXXXX.p";
    std::vector<char> buf(path.begin(), path.end());
    buf.push_back('\0');
    int fd = mkstemps(buf.data(), 2);
    if (fd < 0) return {ProverVerdict::ToolError, "cannot create a temporary problem file"};
    path = buf.data();
    bool wrote = ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size());
    ::close(fd);
    struct Cleanup {
        std::string p;
        ~Cleanup() { std::remove(p.c_str()); }
    } cleanup{path};
    if (!wrote) return {ProverVerdict::ToolError, "cannot write the problem file"};

    std::string cmd = command_template;
    auto substitute = [&](const std::string& key, const std::string& value) {
        for (std::size_t at = cmd.find(key); at != std::string::npos; at = cmd.find(key, at + value.size()))
            cmd.replace(at, key.size(), value);
    };
    bool has_file = cmd.find("{file}") != std::string::npos;
    substitute("{file}", "'" + path + "'");
    substitute("{timeout}", std::to_string(timeout_s));
    if (!has_file) cmd += " '" + path + "'";

    int pipefd[2];
    if (pipe(pipefd) != 0) return {ProverVerdict::ToolError, "cannot create a pipe"};
    pid_t pid = fork();
    if (pid < 0) {
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        return {ProverVerdict::ToolError, "cannot fork"};
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    ::close(pipefd[1]);
    std::string output;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s + 5);
    bool timed_out = false;
    char chunk[4096];
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        pollfd p{pipefd[0], POLLIN, 0};
        int r = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
        if (r < 0 && errno != EINTR) break;
        if (r <= 0) continue;
        ssize_t n = ::read(pipefd[0], chunk, sizeof chunk);
        if (n <= 0) break;
        output.append(chunk, static_cast<std::size_t>(n));
    }
    ::close(pipefd[0]);
    if (timed_out) kill(-pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    if (timed_out) return {ProverVerdict::Timeout, "prover exceeded " + std::to_string(timeout_s) + " s"};
    ProverVerdict v = parse_szs_status(output);
    if (v.kind == ProverVerdict::ToolError && WIFEXITED(status) && WEXITSTATUS(status) == 127)
        return {ProverVerdict::ToolError, "prover command not found"};
    return v;
}

}  // namespace sloop
