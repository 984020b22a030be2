#include "pushlex.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "engine.hpp"
#include "errors.hpp"
#include "stats.hpp"

using namespace pushlex;

struct plx_result {
    RunResult result;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

plx_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return PLX_ERROR_INVALID_ARGUMENT;
    case ErrorCode::parse: return PLX_ERROR_PARSE;
    case ErrorCode::unknown_name: return PLX_ERROR_UNKNOWN_NAME;
    case ErrorCode::io: return PLX_ERROR_IO;
    case ErrorCode::precondition: return PLX_ERROR_PRECONDITION;
    case ErrorCode::internal: return PLX_ERROR_INTERNAL;
    }
    return PLX_ERROR_INTERNAL;
}

void set_err(char** err_out, const std::string& msg) {
    if (err_out) *err_out = dup_string(msg);
}

template <typename F>
plx_status guarded(char** err_out, F&& f) {
    if (err_out) *err_out = nullptr;
    try {
        return f();
    } catch (const Error& e) {
        set_err(err_out, e.what());
        return status_of(e.code());
    } catch (const nlohmann::json::exception& e) {
        set_err(err_out, e.what());
        return PLX_ERROR_PARSE;
    } catch (const std::bad_alloc&) {
        return PLX_ERROR_INTERNAL;
    } catch (const std::exception& e) {
        set_err(err_out, e.what());
        return PLX_ERROR_INTERNAL;
    }
}

nlohmann::json parse_json(const char* text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::parse, std::string("invalid JSON in ") + what);
    return j;
}

} // namespace

extern "C" {

const char* plx_version(void) { return "0.1.0"; }

const char* plx_status_name(plx_status status) {
    switch (status) {
    case PLX_OK: return "ok";
    case PLX_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case PLX_ERROR_PARSE: return "parse error";
    case PLX_ERROR_UNKNOWN_NAME: return "unknown name";
    case PLX_ERROR_IO: return "i/o error";
    case PLX_ERROR_PRECONDITION: return "precondition violated";
    case PLX_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void plx_string_free(char* s) { std::free(s); }

plx_status plx_run(const char* config_json, plx_result** result_out, char** err_out) {
    if (result_out) *result_out = nullptr;
    return guarded(err_out, [&]() -> plx_status {
        if (!config_json || !result_out)
            fail(ErrorCode::invalid_argument, "config_json and result_out must be non-NULL");
        RunConfig cfg = RunConfig::from_json(parse_json(config_json, "run config"));
        auto* handle = new plx_result{run_evolution(cfg)};
        *result_out = handle;
        return PLX_OK;
    });
}

plx_status plx_result_to_json(const plx_result* result, char** json_out) {
    if (json_out) *json_out = nullptr;
    return guarded(nullptr, [&]() -> plx_status {
        if (!result || !json_out)
            fail(ErrorCode::invalid_argument, "result and json_out must be non-NULL");
        *json_out = dup_string(result->result.to_json().dump());
        return *json_out ? PLX_OK : PLX_ERROR_INTERNAL;
    });
}

plx_status plx_result_log_jsonl(const plx_result* result, char** jsonl_out) {
    if (jsonl_out) *jsonl_out = nullptr;
    return guarded(nullptr, [&]() -> plx_status {
        if (!result || !jsonl_out)
            fail(ErrorCode::invalid_argument, "result and jsonl_out must be non-NULL");
        *jsonl_out = dup_string(result->result.log_jsonl());
        return *jsonl_out ? PLX_OK : PLX_ERROR_INTERNAL;
    });
}

void plx_result_free(plx_result* result) { delete result; }

plx_status plx_simplify(const char* genome_json, const char* problem_name, uint64_t steps,
                        uint64_t seed, char** genome_out, char** err_out) {
    if (genome_out) *genome_out = nullptr;
    return guarded(err_out, [&]() -> plx_status {
        if (!genome_json || !problem_name || !genome_out)
            fail(ErrorCode::invalid_argument,
                 "genome_json, problem_name and genome_out must be non-NULL");
        const ProblemSpec& p = problem(problem_name);
        Genome g = genome_from_json(parse_json(genome_json, "genome"));

        Rng cases_rng = substream(seed, Stream::cases);
        CaseSet train = make_cases(p, p.default_train_size, CaseRole::train, cases_rng);

        Interpreter interp;
        auto passes = [&](const Genome& candidate) {
            Program prog = translate(candidate);
            for (const TrainingCase& c : train.cases)
                if (evaluate_with(interp, prog, c, p) != 0.0) return false;
            return true;
        };
        Rng rng = substream(seed, Stream::simplify);
        Genome slim = simplify(g, passes, steps, rng);
        *genome_out = dup_string(genome_to_json(slim).dump());
        return *genome_out ? PLX_OK : PLX_ERROR_INTERNAL;
    });
}

plx_status plx_report(const char* results_array_json, char** csv_out, char** table_out,
                      char** err_out) {
    if (csv_out) *csv_out = nullptr;
    if (table_out) *table_out = nullptr;
    return guarded(err_out, [&]() -> plx_status {
        if (!results_array_json)
            fail(ErrorCode::invalid_argument, "results_array_json must be non-NULL");
        nlohmann::json arr = parse_json(results_array_json, "results array");
        if (!arr.is_array()) fail(ErrorCode::parse, "results must be a JSON array");
        std::vector<nlohmann::json> docs(arr.begin(), arr.end());
        ExperimentSummary summary = ExperimentSummary::from_results(docs);
        if (csv_out) *csv_out = dup_string(summary.to_csv());
        if (table_out) *table_out = dup_string(summary.to_table());
        return PLX_OK;
    });
}

plx_status plx_instruction_set_json(char** json_out) {
    if (json_out) *json_out = nullptr;
    return guarded(nullptr, [&]() -> plx_status {
        if (!json_out) fail(ErrorCode::invalid_argument, "json_out must be non-NULL");
        nlohmann::json arr = nlohmann::json::array();
        for (const InstructionInfo& info : instruction_table()) {
            arr.push_back({{"name", std::string(info.name)},
                           {"opens", info.opens},
                           {"pops", std::string(info.pops)},
                           {"pushes", std::string(info.pushes)}});
        }
        *json_out = dup_string(arr.dump());
        return *json_out ? PLX_OK : PLX_ERROR_INTERNAL;
    });
}

plx_status plx_problem_names_json(char** json_out) {
    if (json_out) *json_out = nullptr;
    return guarded(nullptr, [&]() -> plx_status {
        if (!json_out) fail(ErrorCode::invalid_argument, "json_out must be non-NULL");
        nlohmann::json arr = problem_names();
        *json_out = dup_string(arr.dump());
        return *json_out ? PLX_OK : PLX_ERROR_INTERNAL;
    });
}

} // extern "C"
