#include "sloop/sloop.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <new>
#include <string>

#include "sloop/commands.hpp"
#include "sloop/oracle.hpp"
#include "sloop/parser.hpp"
#include "sloop/transform.hpp"

struct sloop_program {
    sloop::Program value;
};
struct sloop_formula {
    sloop::Formula value;
};
struct sloop_interpretation {
    sloop::Interpretation value;
};

namespace {

thread_local std::string last_error;

sloop_status status_of(sloop::ErrorKind k) {
    switch (k) {
    case sloop::ErrorKind::Parse: return SLOOP_ERR_PARSE;
    case sloop::ErrorKind::Signature: return SLOOP_ERR_SIGNATURE;
    case sloop::ErrorKind::InvalidArgument: return SLOOP_ERR_INVALID_ARGUMENT;
    case sloop::ErrorKind::Unsupported: return SLOOP_ERR_UNSUPPORTED;
    case sloop::ErrorKind::Budget: return SLOOP_ERR_BUDGET;
    case sloop::ErrorKind::Tool: return SLOOP_ERR_TOOL;
    }
    return SLOOP_ERR_INTERNAL;
}

template <typename Fn>
sloop_status guarded(Fn&& fn) {
    try {
        fn();
        return SLOOP_OK;
    } catch (const sloop::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("options: ") + e.what();
        return SLOOP_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SLOOP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SLOOP_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw sloop::Error(sloop::ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sloop::CommandOptions options_from_json(const char* text) {
    sloop::CommandOptions o;
    if (!text || !*text) return o;
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw sloop::Error(sloop::ErrorKind::InvalidArgument, "options must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "formula_input") o.formula_input = v.get<bool>();
        else if (key == "simplify") o.simplify = v.get<bool>();
        else if (key == "assume_bounded") o.assume_bounded = v.get<bool>();
        else if (key == "herbrand") o.herbrand = v.get<bool>();
        else if (key == "universe_size") o.universe_size = v.get<int>();
        else if (key == "intensional") o.intensional = sloop::parse_predicate_list(v.get<std::string>());
        else if (key == "prover_cmd") o.prover_cmd = v.get<std::string>();
        else if (key == "timeout") o.timeout = v.get<int>();
        else if (key == "format") o.format = v.get<std::string>();
        else if (key == "depth") o.depth = v.get<int>();
        else if (key == "flavor") o.flavor = v.get<std::string>();
        else if (key == "pipeline") o.pipeline = v.get<std::string>();
        else if (key == "queries") o.queries = v.get<std::vector<std::string>>();
        else if (key == "budget") o.budget = v.get<std::uint64_t>();
        else if (key == "max_structures") o.max_structures = v.get<std::uint64_t>();
        else throw sloop::Error(sloop::ErrorKind::InvalidArgument, "unknown option '" + key + "'");
    }
    return o;
}

}  // namespace

extern "C" {

const char* sloop_version(void) { return "0.1.0"; }

const char* sloop_last_error(void) { return last_error.c_str(); }

const char* sloop_status_name(sloop_status status) {
    switch (status) {
    case SLOOP_OK: return "ok";
    case SLOOP_ERR_PARSE: return "parse error";
    case SLOOP_ERR_SIGNATURE: return "signature error";
    case SLOOP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SLOOP_ERR_UNSUPPORTED: return "unsupported";
    case SLOOP_ERR_BUDGET: return "budget exceeded";
    case SLOOP_ERR_TOOL: return "tool error";
    case SLOOP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void sloop_string_free(char* s) { std::free(s); }

sloop_status sloop_program_parse(const char* text, sloop_program** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new sloop_program{sloop::parse_program(text)};
    });
}

void sloop_program_free(sloop_program* p) { delete p; }

sloop_status sloop_program_to_string(const sloop_program* p, char** out) {
    return guarded([&] {
        require(p, "program");
        require(out, "out");
        *out = dup(sloop::to_string(p->value));
    });
}

sloop_status sloop_program_formula(const sloop_program* p, sloop_formula** out) {
    return guarded([&] {
        require(p, "program");
        require(out, "out");
        *out = new sloop_formula{sloop::fol_representation(p->value)};
    });
}

sloop_status sloop_formula_parse(const char* text, sloop_formula** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        sloop::ParseOptions po;
        po.allow_reserved = true;
        *out = new sloop_formula{sloop::parse_formula(text, po)};
    });
}

void sloop_formula_free(sloop_formula* f) { delete f; }

sloop_status sloop_formula_to_string(const sloop_formula* f, char** out) {
    return guarded([&] {
        require(f, "formula");
        require(out, "out");
        *out = dup(sloop::to_string(f->value));
    });
}

sloop_status sloop_interpretation_parse(const char* text, sloop_interpretation** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new sloop_interpretation{sloop::parse_interpretation(text)};
    });
}

void sloop_interpretation_free(sloop_interpretation* i) { delete i; }

sloop_status sloop_interpretation_to_string(const sloop_interpretation* i, char** out) {
    return guarded([&] {
        require(i, "interpretation");
        require(out, "out");
        *out = dup(sloop::to_string(i->value));
    });
}

sloop_status sloop_check_sm(const sloop_formula* f, const sloop_interpretation* i, const char* intensional,
                            int* result) {
    return guarded([&] {
        require(f, "formula");
        require(i, "interpretation");
        require(result, "result");
        std::optional<std::vector<sloop::Symbol>> p;
        if (intensional) p = sloop::parse_predicate_list(intensional);
        *result = sloop::check_sm(f->value, i->value, p) ? 1 : 0;
    });
}

sloop_status sloop_run(const char* command, const char* input, const char* options_json, char** output,
                       int* exit_code) {
    return guarded([&] {
        require(command, "command");
        require(input, "input");
        require(output, "output");
        require(exit_code, "exit_code");
        auto r = sloop::run_command(command, input, options_from_json(options_json));
        *output = dup(r.output);
        *exit_code = r.exit_code;
    });
}

}  // extern "C"
