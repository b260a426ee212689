#include "sloop/commands.hpp"

#include <json.hpp>
#include <sstream>

#include "sloop/analysis.hpp"
#include "sloop/generators.hpp"
#include "sloop/oracle.hpp"
#include "sloop/parser.hpp"
#include "sloop/tptp.hpp"
#include "sloop/transform.hpp"

namespace sloop {

using json = nlohmann::ordered_json;

namespace {

struct Input {
    std::optional<Program> program;
    Formula formula;  // FOL representation for programs
    std::vector<Symbol> intensional;
    std::optional<int> universe_hint;
    std::vector<Formula> queries;
};

Input read_input(const std::string& text, const CommandOptions& opts) {
    Input in;
    ParseOptions po;
    po.allow_reserved = true;
    if (opts.formula_input) {
        in.formula = parse_formula(text, po);
        Signature sig = signature_of(in.formula);
        in.intensional = sig.predicates();
    } else {
        in.program = parse_program(text, po);
        in.formula = fol_representation(*in.program);
        in.intensional = in.program->intensional_predicates();
        in.universe_hint = in.program->universe_hint;
        in.queries = in.program->queries;
    }
    if (opts.intensional) in.intensional = *opts.intensional;
    for (const auto& q : opts.queries) in.queries.push_back(parse_formula(q, po));
    return in;
}

bool covers_all(const Formula& f, const std::vector<Symbol>& p) {
    Signature sig = signature_of(f);
    for (const auto& s : sig.predicates())
        if (std::find(p.begin(), p.end(), s) == p.end()) return false;
    return true;
}

std::vector<std::string> names_of(const std::vector<Symbol>& p) {
    std::vector<std::string> out;
    for (const auto& s : p) out.push_back(s.name);
    return out;
}

json verdict_json(const Verdict& v) { return json{{"value", to_string(v)}, {"reason", v.reason}}; }

std::string format_formula(const Formula& f, const CommandOptions& opts) {
    return to_string(opts.simplify ? simplify(f) : f);
}

// ------------------------------------------------------------------ analyze

CommandResult analyze(const Input& in, const CommandOptions& opts) {
    Formula rf = rectify(in.formula);
    json r;
    r["input"] = in.program ? "program" : "formula";
    r["rectified"] = is_rectified(in.formula);
    r["normal_form"] = in.program ? is_normal_form(*in.program) : is_normal_form(in.formula);
    r["tight"] = is_tight(rf);
    auto semi = [&](const std::optional<std::vector<std::string>>& p) -> json {
        try {
            return is_semi_safe(rf, p);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unsupported) throw;
            return nullptr;
        }
    };
    r["semi_safe"] = semi(std::nullopt);
    bool proper = !covers_all(in.formula, in.intensional);
    if (proper) r["semi_safe_relative"] = semi(names_of(in.intensional));
    r["intensional"] = json::array();
    for (const auto& s : in.intensional) r["intensional"].push_back(s.name + "/" + std::to_string(s.arity));
    r["bounded"] = verdict_json(is_bounded(rf, opts.assume_bounded));
    r["atomic_tight"] = verdict_json(is_atomic_tight(rf));
    LoopSetResult loops = enumerate_loops(rf, opts.depth);
    r["loop_status"] = to_string(loops.status);
    r["loop_caveat"] = loops.caveat;
    r["loop_depth"] = loops.depth;
    r["loops"] = json::array();
    for (const auto& y : loops.loops) r["loops"].push_back(to_string(y));

    if (opts.format == "json") return {r.dump(2) + "\n", 0};
    std::ostringstream os;
    auto yn = [](const json& v) -> std::string {
        if (v.is_null()) return "unknown";
        return v.get<bool>() ? "yes" : "no";
    };
    os << "input: " << r["input"].get<std::string>() << "\n";
    os << "rectified: " << yn(r["rectified"]) << "\n";
    os << "normal_form: " << yn(r["normal_form"]) << "\n";
    os << "tight: " << yn(r["tight"]) << "\n";
    os << "semi_safe: " << yn(r["semi_safe"]) << "\n";
    if (proper) os << "semi_safe_relative: " << yn(r["semi_safe_relative"]) << "\n";
    for (const char* key : {"bounded", "atomic_tight"}) {
        os << key << ": " << r[key]["value"].get<std::string>();
        auto reason = r[key]["reason"].get<std::string>();
        if (!reason.empty()) os << " (" << reason << ")";
        os << "\n";
    }
    os << "loop_status: " << r["loop_status"].get<std::string>();
    if (loops.caveat) os << " (saturation only)";
    os << "\nloops:\n";
    for (const auto& y : loops.loops) os << "  " << to_string(y) << "\n";
    return {os.str(), 0};
}

// -------------------------------------------------------------- loopformulas

LoopFormulaSet run_pipeline(const Input& in, const CommandOptions& opts) {
    std::string which = opts.pipeline;
    std::optional<std::vector<Symbol>> p;
    if (opts.intensional) p = in.intensional;
    if (which == "slf") return slf(in.formula, p);
    if (which == "auto") {
        Formula rf = rectify(in.formula);
        Formula g = covers_all(rf, in.intensional) ? rf : extensional_transform(rf, in.intensional);
        which = is_bounded(rectify(g), opts.assume_bounded).value == Verdict::Yes ? "bounded" : "semi-safe";
    }
    if (which == "bounded") {
        PipelineOptions po;
        po.assume_bounded = opts.assume_bounded;
        po.depth = opts.depth;
        if (opts.flavor) {
            auto fl = parse_flavor(*opts.flavor);
            if (!fl) throw Error(ErrorKind::InvalidArgument, "unknown flavor '" + *opts.flavor + "'");
            po.flavor = fl;
        }
        if (in.program) {
            Program prog = *in.program;
            if (opts.intensional) prog.intensional = in.intensional;
            return bounded_pipeline(prog, po);
        }
        if (opts.intensional && !covers_all(in.formula, in.intensional))
            throw Error(ErrorKind::InvalidArgument, "formula input with extensional predicates needs a program or the semi-safe pipeline");
        return bounded_pipeline(in.formula, po);
    }
    if (which == "semi-safe") {
        if (in.program) return semi_safe_pipeline(*in.program, in.intensional);
        return semi_safe_pipeline(in.formula, in.intensional);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown pipeline '" + opts.pipeline + "'");
}

json labeled_json(const std::vector<LabeledFormula>& fs, const CommandOptions& opts) {
    json a = json::array();
    for (const auto& lf : fs) a.push_back(json{{"label", lf.label}, {"formula", format_formula(lf.formula, opts)}});
    return a;
}

CommandResult loopformulas(const Input& in, const CommandOptions& opts) {
    LoopFormulaSet set = run_pipeline(in, opts);
    if (opts.format == "json") {
        json r;
        r["provenance"] = set.provenance;
        r["side_conditions"] = set.side_conditions;
        r["formulas"] = labeled_json(set.formulas, opts);
        r["alternative"] = labeled_json(set.alternative, opts);
        return {r.dump(2) + "\n", 0};
    }
    std::ostringstream os;
    os << "% " << set.provenance << "\n";
    for (const auto& c : set.side_conditions) os << "% requires: " << c << "\n";
    for (const auto& lf : set.formulas) os << "% " << lf.label << "\n" << format_formula(lf.formula, opts) << ".\n";
    if (!set.alternative.empty()) {
        os << "% alternative set\n";
        for (const auto& lf : set.alternative) os << "% " << lf.label << "\n" << format_formula(lf.formula, opts) << ".\n";
    }
    return {os.str(), 0};
}

// ---------------------------------------------------------------- completion

CommandResult completion_cmd(const Input& in, const CommandOptions& opts) {
    if (!in.program) throw Error(ErrorKind::InvalidArgument, "completion needs program input");
    Formula cnf = clark_normal_form(*in.program);
    Formula comp = completion(cnf);
    if (opts.format == "json") {
        json r{{"clark_normal_form", format_formula(cnf, opts)}, {"completion", format_formula(comp, opts)}};
        return {r.dump(2) + "\n", 0};
    }
    return {format_formula(comp, opts) + ".\n", 0};
}

// --------------------------------------------------------------------- tptp

TptpProblem job_for(const Input& in, const LoopFormulaSet& set, const std::optional<Formula>& query) {
    TptpProblem p;
    if (in.program) {
        p = build_entailment_job(*in.program, set, query.value_or(Formula::top()));
    } else {
        Program wrapper;
        p = build_entailment_job(wrapper, set, query.value_or(Formula::top()));
        std::vector<std::pair<std::string, Formula>> axioms;
        int k = 0;
        for (const auto& c : flatten_conjunction(in.formula)) axioms.emplace_back("ax_" + std::to_string(++k), c);
        axioms.insert(axioms.end(), p.axioms.begin(), p.axioms.end());
        p.axioms = std::move(axioms);
    }
    if (!query) p.conjecture.reset();
    return p;
}

CommandResult tptp_cmd(const Input& in, const CommandOptions& opts) {
    if (in.queries.size() > 1) throw Error(ErrorKind::InvalidArgument, "tptp takes at most one query");
    LoopFormulaSet set = run_pipeline(in, opts);
    std::optional<Formula> q;
    if (!in.queries.empty()) q = in.queries.front();
    std::string text = to_tptp(job_for(in, set, q));
    if (opts.format == "json") return {json{{"tptp", text}}.dump(2) + "\n", 0};
    return {text, 0};
}

// ------------------------------------------------------------------- models

json model_json(const Interpretation& m) {
    json r;
    r["universe"] = m.universe();
    r["constants"] = json::object();
    for (const auto& [c, e] : m.constants()) r["constants"][c] = m.universe()[static_cast<std::size_t>(e)];
    r["functions"] = json::object();
    for (const auto& [f, t] : m.functions()) {
        json entries = json::array();
        for (std::size_t idx = 0; idx < t.values.size(); ++idx) {
            json args = json::array();
            for (int e : m.tuple_at(t.arity, idx)) args.push_back(m.universe()[static_cast<std::size_t>(e)]);
            entries.push_back(json{{"args", args}, {"value", m.universe()[static_cast<std::size_t>(t.values[idx])]}});
        }
        r["functions"][f] = entries;
    }
    r["predicates"] = json::object();
    for (const auto& [p, t] : m.predicates()) {
        json tuples = json::array();
        for (std::size_t idx = 0; idx < t.bits.size(); ++idx) {
            if (!t.bits[idx]) continue;
            json tuple = json::array();
            for (int e : m.tuple_at(t.arity, idx)) tuple.push_back(m.universe()[static_cast<std::size_t>(e)]);
            tuples.push_back(tuple);
        }
        r["predicates"][p] = tuples;
    }
    return r;
}

SearchOptions search_options(const CommandOptions& opts) {
    SearchOptions so;
    so.oracle.budget = opts.budget;
    so.max_structures = opts.max_structures;
    return so;
}

CommandResult models(const Input& in, const CommandOptions& opts) {
    int n = opts.universe_size.value_or(in.universe_hint.value_or(2));
    auto ms = enumerate_stable_models(in.formula, in.intensional, n, opts.herbrand, search_options(opts));
    int code = ms.empty() ? 1 : 0;
    if (opts.format == "json") {
        json r;
        r["herbrand"] = opts.herbrand;
        if (!opts.herbrand) r["universe_size"] = n;
        r["models"] = json::array();
        for (const auto& m : ms) r["models"].push_back(model_json(m));
        return {r.dump(2) + "\n", code};
    }
    std::ostringstream os;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (opts.herbrand)
            os << to_compact_string(ms[k]) << "\n";
        else
            os << "% model " << k + 1 << "\n" << to_string(ms[k]);
    }
    if (ms.empty()) os << "% no stable models\n";
    return {os.str(), code};
}

// ------------------------------------------------------------------- entail

CommandResult entail(const Input& in, const CommandOptions& opts) {
    if (in.queries.empty()) throw Error(ErrorKind::InvalidArgument, "entail needs a query (#query or --query)");
    int max_n = opts.universe_size.value_or(in.universe_hint.value_or(3));
    std::optional<std::vector<Symbol>> p = in.intensional;
    int code = 0;
    json results = json::array();
    std::ostringstream os;
    std::optional<LoopFormulaSet> set;
    std::string pipeline_error;
    if (opts.prover_cmd) {
        try {
            set = run_pipeline(in, opts);
        } catch (const Error& e) {
            pipeline_error = e.what();
        }
    }
    for (const auto& q : in.queries) {
        json r;
        r["query"] = to_string(q);
        EntailmentResult res = check_entailment_finite(in.formula, q, p, max_n, search_options(opts));
        if (res.kind == EntailmentResult::Refuted) {
            code = 1;
            r["finite"] = "Refuted";
            r["universe"] = res.universe;
            r["counter_model"] = model_json(*res.counter_model);
            os << to_string(q) << ": Refuted (counter-model of size " << res.universe << ")\n"
               << to_string(*res.counter_model);
        } else {
            r["finite"] = "ConsistentUpTo";
            r["universe"] = res.universe;
            r["herbrand_checked"] = res.herbrand_checked;
            os << to_string(q) << ": ConsistentUpTo(" << res.universe << ")"
               << (res.herbrand_checked ? ", Herbrand models checked" : "") << "\n";
        }
        if (opts.prover_cmd) {
            if (!set) {
                r["prover"] = json{{"verdict", "Skipped"}, {"detail", pipeline_error}};
                os << "  prover: skipped (" << pipeline_error << ")\n";
            } else {
                ProverVerdict v = invoke_prover(*opts.prover_cmd, job_for(in, *set, q), opts.timeout);
                r["prover"] = json{{"verdict", to_string(v.kind)}, {"detail", v.detail}};
                os << "  prover: " << to_string(v.kind) << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
                if (v.kind == ProverVerdict::CounterSatisfiable) code = std::max(code, 1);
                if (v.kind == ProverVerdict::ToolError) code = 2;
            }
        }
        results.push_back(r);
    }
    if (opts.format == "json") return {json{{"results", results}}.dump(2) + "\n", code};
    return {os.str(), code};
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"analyze", "loopformulas", "completion", "tptp", "models", "entail"};
    return names;
}

std::vector<Symbol> parse_predicate_list(const std::string& text) {
    std::vector<Symbol> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, e - b + 1);
        auto slash = item.find('/');
        if (slash == std::string::npos || slash == 0)
            throw Error(ErrorKind::InvalidArgument, "predicate '" + item + "' must be written name/arity");
        std::string arity = item.substr(slash + 1);
        if (arity.empty() || arity.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "predicate '" + item + "' has a malformed arity");
        out.push_back({item.substr(0, slash), std::stoi(arity)});
    }
    return out;
}

CommandResult run_command(const std::string& command, const std::string& input, const CommandOptions& opts) {
    if (opts.format != "text" && opts.format != "json")
        throw Error(ErrorKind::InvalidArgument, "format must be text or json");
    Input in = read_input(input, opts);
    if (command == "analyze") return analyze(in, opts);
    if (command == "loopformulas") return loopformulas(in, opts);
    if (command == "completion") return completion_cmd(in, opts);
    if (command == "tptp") return tptp_cmd(in, opts);
    if (command == "models") return models(in, opts);
    if (command == "entail") return entail(in, opts);
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
}

}  // namespace sloop
