#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genome.hpp"
#include "problems.hpp"
#include "selection.hpp"

namespace pushlex {

enum class ScheduleMode { full, downsample_gens, downsample_pop, static_subsample, truncated };

const char* mode_name(ScheduleMode m);
ScheduleMode mode_from_name(const std::string& name); // throws Error(unknown_name)

struct RunConfig {
    std::string problem;
    std::uint64_t seed = 0;
    std::size_t base_population = 1000;
    std::size_t base_generations = 300;
    double d = 1.0; // subsampling level, fraction of the training set per generation
    ScheduleMode mode = ScheduleMode::full;
    std::size_t truncation_depth = 0; // cases per selection in truncated mode
    std::uint64_t step_limit = kDefaultStepLimit;
    double umad_addition_rate = 0.09;
    std::size_t genome_min = 20;
    std::size_t genome_max = 100;
    std::size_t simplify_steps = 1000;
    std::size_t train_size = 0; // 0 = problem default
    std::size_t test_size = 0;  // 0 = problem default
    std::string cases_file;     // optional external training set (JSON Lines)
    std::vector<Genome> initial_genomes; // prepended to the generation-0 population

    void validate() const; // throws Error(invalid_argument / unknown_name)
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j); // strict: rejects unknown keys
};

struct DerivedSchedule {
    std::size_t population = 0;
    std::size_t max_generations = 0;
    std::size_t subsample_size = 0;
    std::uint64_t execution_budget = 0;

    nlohmann::json to_json() const;
};

// Round-half-up scaling of generations/population by 1/d, subsample size
// max(1, round(d*n)), budget = full_train_size * base_population *
// base_generations for every mode.
DerivedSchedule derive_schedule(const RunConfig& config, std::size_t full_train_size);

// Active case indices for one generation. Downsample modes draw a fresh
// sample (without replacement, ascending) per generation; static_subsample
// reuses the generation-0 draw; full/truncated use every case.
std::vector<std::size_t> choose_subsample(ScheduleMode mode, std::size_t n_cases,
                                          std::size_t size, std::uint64_t generation,
                                          std::uint64_t master_seed);

struct GenerationRecord {
    std::uint64_t generation = 0;
    double best_error = 0.0;     // lowest summed error over the active subsample
    double diversity = 0.0;      // distinct error vectors / population
    double hyperselection = 0.0; // largest share of parent selections won by one individual
    std::vector<std::size_t> subsample;

    nlohmann::json to_json() const;
};

struct RunResult {
    RunConfig config;
    DerivedSchedule schedule;
    bool success = false;     // a simplified program passes the full training set
    bool generalized = false; // ... and the unseen test set
    std::optional<std::uint64_t> generation_found;
    std::optional<Genome> solution;   // as found
    std::optional<Genome> simplified; // after automatic simplification
    std::uint64_t generations_run = 0;
    std::uint64_t evolution_executions = 0;
    std::uint64_t validation_executions = 0;
    std::uint64_t simplify_executions = 0;
    std::uint64_t test_executions = 0;
    std::vector<GenerationRecord> generations;

    nlohmann::json to_json() const; // one document, without the per-generation records
    std::string log_jsonl() const;  // per-generation records, one JSON object per line
};

// The full run: initialize, evolve under the execution budget, validate
// subsample-passers against the full training set, simplify a found solution
// and check generalization on the unseen test set. Deterministic under
// (config, seed).
RunResult run_evolution(const RunConfig& config);

} // namespace pushlex
