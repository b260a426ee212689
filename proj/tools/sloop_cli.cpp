// Command-line front end; talks to the library only through the C interface.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sloop/sloop.h"

namespace {

struct Flags {
    std::vector<std::string> inputs;
    bool formula = false;
    bool simplify = false;
    bool assume_bounded = false;
    bool herbrand = false;
    int universe_size = 0;
    std::string intensional;
    std::string prover_cmd;
    int timeout = 0;
    std::string format = "text";
    std::string config;
    int depth = 0;
    std::string flavor;
    std::string pipeline;
    std::vector<std::string> queries;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string read_input(const std::string& path) {
    if (path == "-") return read_all(std::cin);
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    return read_all(f);
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int n = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(f, line)) {
        ++n;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(n) + ": expected key=value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-order loop formulas, completion, TPTP export and a finite stable-model oracle"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sloop_version());
    Flags fl;

    auto common = [&](CLI::App* sub) {
        sub->add_option("inputs", fl.inputs, "Input files, concatenated ('-' reads stdin)")->required();
        sub->add_flag("--formula", fl.formula, "Input is a single sentence instead of a program");
        sub->add_option("--intensional", fl.intensional, "Intensional predicates, e.g. p/1,q/2");
        sub->add_option("--format", fl.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };
    auto pipeline = [&](CLI::App* sub) {
        sub->add_flag("--simplify", fl.simplify, "Fold trivial subformulas in the output");
        sub->add_flag("--assume-bounded", fl.assume_bounded, "Treat the input as bounded");
        sub->add_option("--depth", fl.depth, "Depth bound for loop enumeration with functions")->check(CLI::PositiveNumber);
        sub->add_option("--flavor", fl.flavor, "Support formula: es, es-disj, nes, qes")
            ->check(CLI::IsMember({"es", "es-disj", "nes", "qes"}));
        sub->add_option("--pipeline", fl.pipeline, "Loop formula construction")
            ->check(CLI::IsMember({"auto", "bounded", "semi-safe", "slf"}));
    };
    auto universe = [&](CLI::App* sub) {
        sub->add_option("--universe-size", fl.universe_size, "Universe size (maximum size for entail)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--herbrand", fl.herbrand, "Enumerate Herbrand models");
    };

    auto* analyze = app.add_subcommand("analyze", "Classify the input and list its loops");
    common(analyze);
    analyze->add_flag("--assume-bounded", fl.assume_bounded, "Treat the input as bounded");
    analyze->add_option("--depth", fl.depth, "Depth bound for loop enumeration with functions")->check(CLI::PositiveNumber);

    auto* lfs = app.add_subcommand("loopformulas", "Print a set of loop formulas");
    common(lfs);
    pipeline(lfs);

    auto* comp = app.add_subcommand("completion", "Print Clark's completion");
    common(comp);
    comp->add_flag("--simplify", fl.simplify, "Fold trivial subformulas in the output");

    auto* tptp = app.add_subcommand("tptp", "Print a TPTP FOF problem");
    common(tptp);
    pipeline(tptp);
    tptp->add_option("--query", fl.queries, "Conjecture")->allow_extra_args(false);

    auto* models = app.add_subcommand("models", "Enumerate stable models");
    common(models);
    universe(models);

    auto* entail = app.add_subcommand("entail", "Check entailment under the stable model semantics");
    common(entail);
    pipeline(entail);
    entail->add_option("--universe-size", fl.universe_size, "Largest universe size to search")->check(CLI::PositiveNumber);
    entail->add_option("--query", fl.queries, "Query sentence (repeatable)")->allow_extra_args(false);
    entail->add_option("--prover-cmd", fl.prover_cmd, "Prover command with {file} and {timeout} placeholders");
    entail->add_option("--timeout", fl.timeout, "Prover timeout in seconds")->check(CLI::PositiveNumber);
    entail->add_option("--config", fl.config, "key=value file (prover_cmd, timeout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    nlohmann::json opts = nlohmann::json::object();
    std::string input;
    try {
        if (!fl.config.empty()) {
            for (const auto& [k, v] : read_config(fl.config)) {
                if (k == "prover_cmd")
                    opts["prover_cmd"] = v;
                else if (k == "timeout")
                    opts["timeout"] = std::stoi(v);
                else
                    throw std::runtime_error("unknown config key '" + k + "'");
            }
        }
        for (const auto& path : fl.inputs) input += read_input(path) + "\n";
    } catch (const std::exception& e) {
        std::cerr << "sloop: " << e.what() << "\n";
        return 2;
    }
    if (fl.formula) opts["formula_input"] = true;
    if (fl.simplify) opts["simplify"] = true;
    if (fl.assume_bounded) opts["assume_bounded"] = true;
    if (fl.herbrand) opts["herbrand"] = true;
    if (fl.universe_size > 0) opts["universe_size"] = fl.universe_size;
    if (!fl.intensional.empty()) opts["intensional"] = fl.intensional;
    if (!fl.prover_cmd.empty()) opts["prover_cmd"] = fl.prover_cmd;
    if (fl.timeout > 0) opts["timeout"] = fl.timeout;
    if (fl.depth > 0) opts["depth"] = fl.depth;
    if (!fl.flavor.empty()) opts["flavor"] = fl.flavor;
    if (!fl.pipeline.empty()) opts["pipeline"] = fl.pipeline;
    if (!fl.queries.empty()) opts["queries"] = fl.queries;
    opts["format"] = fl.format;

    char* out = nullptr;
    int exit_code = 0;
    sloop_status st = sloop_run(command.c_str(), input.c_str(), opts.dump().c_str(), &out, &exit_code);
    if (st != SLOOP_OK) {
        std::cerr << "sloop: " << sloop_status_name(st) << ": " << sloop_last_error() << "\n";
        return 2;
    }
    std::cout << out;
    sloop_string_free(out);
    return exit_code;
}
