#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"

namespace pushlex {

namespace {

constexpr const char* kModeNames[] = {"full", "downsample_gens", "downsample_pop",
                                      "static_subsample", "truncated"};

std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

} // namespace

const char* mode_name(ScheduleMode m) { return kModeNames[static_cast<int>(m)]; }

ScheduleMode mode_from_name(const std::string& name) {
    for (int i = 0; i < 5; ++i)
        if (name == kModeNames[i]) return static_cast<ScheduleMode>(i);
    fail(ErrorCode::unknown_name, "unknown schedule mode '" + name + "'");
}

void RunConfig::validate() const {
    pushlex::problem(problem); // throws for unknown problems
    if (!(d > 0.0 && d <= 1.0))
        fail(ErrorCode::invalid_argument, "subsampling level d must be in (0, 1]");
    if (mode == ScheduleMode::full && d != 1.0)
        fail(ErrorCode::invalid_argument, "mode 'full' requires d = 1.0");
    if (mode == ScheduleMode::truncated && truncation_depth < 1)
        fail(ErrorCode::invalid_argument, "mode 'truncated' requires truncation_depth >= 1");
    if (base_population < 1) fail(ErrorCode::invalid_argument, "population must be >= 1");
    if (step_limit < 1) fail(ErrorCode::invalid_argument, "step_limit must be >= 1");
    if (!(umad_addition_rate >= 0.0 && umad_addition_rate < 1.0))
        fail(ErrorCode::invalid_argument, "umad_addition_rate must be in [0, 1)");
    if (genome_min < 1 || genome_min > genome_max)
        fail(ErrorCode::invalid_argument, "genome size range must satisfy 1 <= min <= max");
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j{
        {"problem", problem},
        {"seed", seed},
        {"population", base_population},
        {"generations", base_generations},
        {"d", d},
        {"mode", mode_name(mode)},
        {"truncation_depth", truncation_depth},
        {"step_limit", step_limit},
        {"umad_addition_rate", umad_addition_rate},
        {"genome_min", genome_min},
        {"genome_max", genome_max},
        {"simplify_steps", simplify_steps},
        {"train_size", train_size},
        {"test_size", test_size},
        {"cases_file", cases_file},
    };
    nlohmann::json seeds = nlohmann::json::array();
    for (const Genome& g : initial_genomes) seeds.push_back(genome_to_json(g));
    j["initial_genomes"] = std::move(seeds);
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorCode::parse, "run config must be a JSON object");
    static const std::unordered_set<std::string> known{
        "problem",     "seed",          "population",   "generations",
        "d",           "mode",          "truncation_depth", "step_limit",
        "umad_addition_rate", "genome_min", "genome_max", "simplify_steps",
        "train_size",  "test_size",     "cases_file",   "initial_genomes"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) fail(ErrorCode::parse, "unknown config key '" + key + "'");

    RunConfig c;
    if (!j.contains("problem") || !j.at("problem").is_string())
        fail(ErrorCode::parse, "config requires a 'problem' name");
    c.problem = j.at("problem").get<std::string>();
    c.seed = j.value("seed", c.seed);
    c.base_population = j.value("population", c.base_population);
    c.base_generations = j.value("generations", c.base_generations);
    c.d = j.value("d", c.d);
    if (j.contains("mode")) c.mode = mode_from_name(j.at("mode").get<std::string>());
    c.truncation_depth = j.value("truncation_depth", c.truncation_depth);
    c.step_limit = j.value("step_limit", c.step_limit);
    c.umad_addition_rate = j.value("umad_addition_rate", c.umad_addition_rate);
    c.genome_min = j.value("genome_min", c.genome_min);
    c.genome_max = j.value("genome_max", c.genome_max);
    c.simplify_steps = j.value("simplify_steps", c.simplify_steps);
    c.train_size = j.value("train_size", c.train_size);
    c.test_size = j.value("test_size", c.test_size);
    c.cases_file = j.value("cases_file", c.cases_file);
    if (j.contains("initial_genomes")) {
        for (const auto& g : j.at("initial_genomes")) c.initial_genomes.push_back(genome_from_json(g));
    }
    c.validate();
    return c;
}

nlohmann::json DerivedSchedule::to_json() const {
    return {{"population", population},
            {"max_generations", max_generations},
            {"subsample_size", subsample_size},
            {"execution_budget", execution_budget}};
}

DerivedSchedule derive_schedule(const RunConfig& config, std::size_t full_train_size) {
    DerivedSchedule s;
    s.execution_budget = static_cast<std::uint64_t>(full_train_size) * config.base_population *
                         config.base_generations;
    s.population = config.base_population;
    s.max_generations = config.base_generations;
    s.subsample_size = std::max<std::size_t>(
        1, round_half_up(config.d * static_cast<double>(full_train_size)));
    switch (config.mode) {
    case ScheduleMode::full:
        s.subsample_size = full_train_size;
        break;
    case ScheduleMode::downsample_gens:
    case ScheduleMode::static_subsample:
        s.max_generations = round_half_up(static_cast<double>(config.base_generations) / config.d);
        break;
    case ScheduleMode::downsample_pop:
        s.population = round_half_up(static_cast<double>(config.base_population) / config.d);
        break;
    case ScheduleMode::truncated:
        // Every case is evaluated each generation; the depth cut happens per
        // selection.
        s.subsample_size = full_train_size;
        break;
    }
    return s;
}

std::vector<std::size_t> choose_subsample(ScheduleMode mode, std::size_t n_cases,
                                          std::size_t size, std::uint64_t generation,
                                          std::uint64_t master_seed) {
    if (size < 1 || size > n_cases)
        fail(ErrorCode::invalid_argument, "subsample size must be in [1, n_cases]");
    switch (mode) {
    case ScheduleMode::full:
    case ScheduleMode::truncated: {
        std::vector<std::size_t> all(n_cases);
        for (std::size_t i = 0; i < n_cases; ++i) all[i] = i;
        return all;
    }
    case ScheduleMode::static_subsample: {
        // The generation-0 draw, reused verbatim for the whole run.
        Rng rng = substream(master_seed, Stream::subsample, 0);
        return sample_indices(rng, n_cases, size);
    }
    case ScheduleMode::downsample_gens:
    case ScheduleMode::downsample_pop: {
        Rng rng = substream(master_seed, Stream::subsample, generation);
        return sample_indices(rng, n_cases, size);
    }
    }
    fail(ErrorCode::internal, "bad schedule mode");
}

nlohmann::json GenerationRecord::to_json() const {
    return {{"generation", generation},
            {"best_error", best_error},
            {"diversity", diversity},
            {"hyperselection", hyperselection},
            {"subsample", subsample}};
}

nlohmann::json RunResult::to_json() const {
    nlohmann::json j{
        {"problem", config.problem},
        {"mode", mode_name(config.mode)},
        {"d", config.d},
        {"seed", config.seed},
        {"config", config.to_json()},
        {"schedule", schedule.to_json()},
        {"success", success},
        {"generalized", generalized},
        {"generations_run", generations_run},
        {"evolution_executions", evolution_executions},
        {"validation_executions", validation_executions},
        {"simplify_executions", simplify_executions},
        {"test_executions", test_executions},
    };
    j["generation_found"] = generation_found ? nlohmann::json(*generation_found)
                                             : nlohmann::json(nullptr);
    j["solution_genome"] = solution ? genome_to_json(*solution) : nlohmann::json(nullptr);
    j["simplified_genome"] = simplified ? genome_to_json(*simplified) : nlohmann::json(nullptr);
    j["solution_program"] =
        simplified ? nlohmann::json(render_program(translate(*simplified)))
                   : (solution ? nlohmann::json(render_program(translate(*solution)))
                               : nlohmann::json(nullptr));
    return j;
}

std::string RunResult::log_jsonl() const {
    std::string out;
    for (const auto& rec : generations) {
        out += rec.to_json().dump();
        out += '\n';
    }
    return out;
}

namespace {

// One evolutionary run; owns the population state and counters.
class Evolution {
  public:
    explicit Evolution(const RunConfig& config)
        : cfg_(config), prob_(problem(config.problem)),
          umad_cfg_(UmadConfig::size_neutral(config.umad_addition_rate)) {}

    RunResult run() {
        RunResult result;
        result.config = cfg_;

        if (cfg_.cases_file.empty()) {
            std::size_t n_train = cfg_.train_size ? cfg_.train_size : prob_.default_train_size;
            std::size_t n_test = cfg_.test_size
                                     ? cfg_.test_size
                                     : (cfg_.train_size ? cfg_.train_size * 10
                                                        : prob_.default_test_size);
            Rng rng = substream(cfg_.seed, Stream::cases);
            auto [train, test] = make_train_test(prob_, n_train, n_test, rng);
            train_ = std::move(train);
            test_ = std::move(test);
        } else {
            train_ = load_cases(cfg_.cases_file, prob_);
            std::size_t n_test = cfg_.test_size ? cfg_.test_size : train_.cases.size() * 10;
            Rng rng = substream(cfg_.seed, Stream::cases);
            test_ = make_test_avoiding(prob_, n_test, train_, rng);
        }

        schedule_ = derive_schedule(cfg_, train_.cases.size());
        result.schedule = schedule_;

        init_population();

        for (std::uint64_t g = 0; g < schedule_.max_generations; ++g) {
            std::uint64_t gen_cost =
                static_cast<std::uint64_t>(schedule_.population) * schedule_.subsample_size;
            if (result.evolution_executions + gen_cost > schedule_.execution_budget)
                break; // budget would be exceeded: the generation is not started
            bool solved = run_generation(g, result);
            result.generations_run = g + 1;
            if (solved) break;
        }

        if (result.success) finish_solution(result);
        return result;
    }

  private:
    const RunConfig& cfg_;
    const ProblemSpec& prob_;
    UmadConfig umad_cfg_;
    CaseSet train_, test_;
    DerivedSchedule schedule_;
    std::vector<Genome> population_;
    Interpreter interp_;

    void init_population() {
        population_.clear();
        population_.reserve(schedule_.population);
        for (const Genome& g : cfg_.initial_genomes) {
            if (population_.size() == schedule_.population) break;
            population_.push_back(g);
        }
        Rng rng = substream(cfg_.seed, Stream::init);
        while (population_.size() < schedule_.population)
            population_.push_back(random_genome(prob_.pool, cfg_.genome_min, cfg_.genome_max, rng));
    }

    // Evaluates the generation, validates subsample-passers against the full
    // training set, then (if the run goes on) selects parents and produces
    // the next population. Returns true when a validated solution ended the
    // run.
    bool run_generation(std::uint64_t g, RunResult& result) {
        const std::size_t pop = schedule_.population;
        std::vector<std::size_t> active = choose_subsample(
            cfg_.mode, train_.cases.size(), schedule_.subsample_size, g, cfg_.seed);

        ErrorMatrix m;
        m.pop = pop;
        m.cases = active.size();
        m.errors.resize(pop * active.size());
        std::vector<Program> programs(pop);
        for (std::size_t i = 0; i < pop; ++i) {
            programs[i] = translate(population_[i]);
            for (std::size_t c = 0; c < active.size(); ++c) {
                m.errors[i * active.size() + c] = evaluate_with(
                    interp_, programs[i], train_.cases[active[c]], prob_, cfg_.step_limit);
            }
        }
        result.evolution_executions += static_cast<std::uint64_t>(pop) * active.size();

        GenerationRecord rec;
        rec.generation = g;
        rec.subsample = active;
        rec.best_error = best_total_error(m);
        rec.diversity = distinct_row_fraction(m);

        // Subsample-passers are validated in population order against the
        // held-out training cases; the first full pass ends the run.
        std::unordered_set<std::size_t> active_set(active.begin(), active.end());
        for (std::size_t i = 0; i < pop; ++i) {
            if (!row_all_zero(m, i)) continue;
            bool passes = true;
            for (std::size_t c = 0; c < train_.cases.size(); ++c) {
                if (active_set.contains(c)) continue; // subsample results reused
                double e = evaluate_with(interp_, programs[i], train_.cases[c], prob_,
                                         cfg_.step_limit);
                ++result.validation_executions;
                if (e != 0.0) passes = false;
            }
            if (passes) {
                result.success = true;
                result.generation_found = g;
                result.solution = population_[i];
                result.generations.push_back(std::move(rec));
                return true;
            }
        }

        // Parent selection: one independent draw per child, each on its own
        // substream.
        std::vector<std::size_t> col_index(active.size());
        for (std::size_t c = 0; c < active.size(); ++c) col_index[c] = c;
        std::vector<std::size_t> wins(pop, 0);
        std::vector<std::size_t> parents(pop);
        for (std::size_t i = 0; i < pop; ++i) {
            Rng rng = substream(cfg_.seed, Stream::selection, g, i);
            SelectionOutcome out =
                cfg_.mode == ScheduleMode::truncated
                    ? truncated_lexicase_select(m, col_index, cfg_.truncation_depth, rng)
                    : lexicase_select(m, col_index, rng);
            parents[i] = out.chosen;
            ++wins[out.chosen];
        }
        // Hyperselection counts wins per error-vector class, so a population
        // of behavioral clones registers as one fully hyperselected class.
        std::unordered_map<std::string, std::size_t> class_wins;
        std::size_t max_wins = 0;
        for (std::size_t i = 0; i < pop; ++i) {
            if (wins[i] == 0) continue;
            std::string key(reinterpret_cast<const char*>(m.errors.data() + i * m.cases),
                            m.cases * sizeof(double));
            max_wins = std::max(max_wins, class_wins[key] += wins[i]);
        }
        rec.hyperselection = static_cast<double>(max_wins) / static_cast<double>(pop);
        result.generations.push_back(std::move(rec));

        std::vector<Genome> next;
        next.reserve(pop);
        for (std::size_t i = 0; i < pop; ++i) {
            Rng rng = substream(cfg_.seed, Stream::mutation, g, i);
            next.push_back(umad(population_[parents[i]], umad_cfg_, prob_.pool, rng));
        }
        population_ = std::move(next);
        return false;
    }

    void finish_solution(RunResult& result) {
        auto passes_training = [&](const Genome& g) {
            Program prog = translate(g);
            for (const TrainingCase& c : train_.cases) {
                ++result.simplify_executions;
                if (evaluate_with(interp_, prog, c, prob_, cfg_.step_limit) != 0.0) return false;
            }
            return true;
        };
        Rng rng = substream(cfg_.seed, Stream::simplify);
        result.simplified = simplify(*result.solution, passes_training, cfg_.simplify_steps, rng);

        Program final_prog = translate(*result.simplified);
        bool ok = true;
        for (const TrainingCase& c : test_.cases) {
            ++result.test_executions;
            if (evaluate_with(interp_, final_prog, c, prob_, cfg_.step_limit) != 0.0) ok = false;
        }
        result.generalized = ok;
    }

    static bool row_all_zero(const ErrorMatrix& m, std::size_t i) {
        for (std::size_t c = 0; c < m.cases; ++c)
            if (m.at(i, c) != 0.0) return false;
        return true;
    }

    static double best_total_error(const ErrorMatrix& m) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m.pop; ++i) {
            double total = 0.0;
            for (std::size_t c = 0; c < m.cases; ++c) total += m.at(i, c);
            best = std::min(best, total);
        }
        return best;
    }

    static double distinct_row_fraction(const ErrorMatrix& m) {
        std::unordered_set<std::string> rows;
        for (std::size_t i = 0; i < m.pop; ++i) {
            rows.insert(std::string(
                reinterpret_cast<const char*>(m.errors.data() + i * m.cases),
                m.cases * sizeof(double)));
        }
        return static_cast<double>(rows.size()) / static_cast<double>(m.pop);
    }
};

} // namespace

RunResult run_evolution(const RunConfig& config) {
    config.validate();
    Evolution evo(config);
    return evo.run();
}

} // namespace pushlex
