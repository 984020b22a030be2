// pushlex command-line interface: single runs, experiment sweeps, report
// generation and genome simplification, all through the shared library's C
// API.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pushlex.h"
#include "plan.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Library statuses that indicate the user supplied a bad input.
bool is_usage_status(plx_status s) {
    return s == PLX_ERROR_INVALID_ARGUMENT || s == PLX_ERROR_PARSE ||
           s == PLX_ERROR_UNKNOWN_NAME || s == PLX_ERROR_PRECONDITION;
}

int status_exit(plx_status s) { return is_usage_status(s) ? kExitUsage : kExitRuntime; }

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { plx_string_free(s); }
    std::string str() const { return s ? std::string(s) : std::string(); }
};

[[noreturn]] void die(int code, const std::string& msg) {
    std::cerr << "pushlex: " << msg << "\n";
    std::exit(code);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) die(kExitRuntime, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) die(kExitRuntime, "cannot write '" + path.string() + "'");
    out << content;
}

// PUSHLEX_OUT overrides the built-in default; an explicit --out flag wins.
std::string default_out_dir() {
    if (const char* env = std::getenv("PUSHLEX_OUT")) return env;
    return "runs";
}

std::vector<std::string> library_problem_names() {
    OwnedString names;
    if (plx_problem_names_json(&names.s) != PLX_OK)
        die(kExitRuntime, "could not query problem names");
    std::vector<std::string> out;
    for (const auto& n : json::parse(names.str())) out.push_back(n.get<std::string>());
    return out;
}

struct RunFiles {
    fs::path result;
    fs::path log;
};

RunFiles run_files(const fs::path& dir, const std::string& stem) {
    return {dir / (stem + ".result.json"), dir / (stem + ".log.jsonl")};
}

// Executes one config and writes <stem>.result.json / <stem>.log.jsonl.
// Returns the result document.
json execute_and_write(const json& config, const fs::path& dir, const std::string& stem) {
    OwnedString err;
    plx_result* result = nullptr;
    plx_status st = plx_run(config.dump().c_str(), &result, &err.s);
    if (st != PLX_OK) die(status_exit(st), "run failed: " + err.str());

    OwnedString result_json, log_jsonl;
    plx_result_to_json(result, &result_json.s);
    plx_result_log_jsonl(result, &log_jsonl.s);
    plx_result_free(result);

    RunFiles files = run_files(dir, stem);
    write_file(files.result, result_json.str());
    write_file(files.log, log_jsonl.str());
    return json::parse(result_json.str());
}

std::string summarize(const json& doc) {
    std::ostringstream os;
    os << doc.at("problem").get<std::string>() << " " << doc.at("mode").get<std::string>()
       << " d=" << doc.at("d").get<double>() << " seed=" << doc.at("seed").get<std::uint64_t>()
       << ": " << (doc.at("generalized").get<bool>() ? "solved" : "unsolved");
    if (!doc.at("generation_found").is_null())
        os << " (generation " << doc.at("generation_found").get<std::uint64_t>()
           << (doc.at("generalized").get<bool>() ? "" : ", failed test set") << ")";
    os << " evolution=" << doc.at("evolution_executions").get<std::uint64_t>()
       << " validation=" << doc.at("validation_executions").get<std::uint64_t>();
    return os.str();
}

// --- run -------------------------------------------------------------------

struct RunOptions {
    std::string problem;
    std::uint64_t seed = 0;
    std::string mode = "full";
    double d = 1.0;
    std::uint64_t population = 1000;
    std::uint64_t generations = 300;
    std::uint64_t truncation_depth = 0;
    std::uint64_t step_limit = 2000;
    double umad_rate = 0.09;
    std::uint64_t simplify_steps = 1000;
    std::uint64_t train_size = 0;
    std::uint64_t test_size = 0;
    std::string cases_file;
    std::string out_dir = default_out_dir();
};

json config_from_options(const RunOptions& o) {
    json config{{"problem", o.problem},
                {"seed", o.seed},
                {"mode", o.mode},
                {"d", o.d},
                {"population", o.population},
                {"generations", o.generations},
                {"step_limit", o.step_limit},
                {"umad_addition_rate", o.umad_rate},
                {"simplify_steps", o.simplify_steps}};
    if (o.truncation_depth) config["truncation_depth"] = o.truncation_depth;
    if (o.train_size) config["train_size"] = o.train_size;
    if (o.test_size) config["test_size"] = o.test_size;
    if (!o.cases_file.empty()) config["cases_file"] = o.cases_file;
    return config;
}

int cmd_run(const RunOptions& o) {
    fs::create_directories(o.out_dir);
    std::string stem = o.problem + "__" + o.mode + "__d" + plxcli::format_level(o.d) +
                       "__seed" + std::to_string(o.seed);
    json doc = execute_and_write(config_from_options(o), o.out_dir, stem);
    std::cout << summarize(doc) << "\n";
    std::cout << "wrote " << run_files(o.out_dir, stem).result.string() << "\n";
    return 0;
}

// --- experiment --------------------------------------------------------------

struct ExperimentOptions {
    std::string plan_file;
    std::string problems, modes, levels, seeds;
    std::uint64_t population = 0, generations = 0; // 0 = keep plan/default
    std::uint64_t truncation_depth = 0;
    std::uint64_t train_size = 0, test_size = 0;
    unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
    std::string out_dir = default_out_dir();
};

template <typename T>
std::vector<T> split_list(const std::string& csv, T (*conv)(const std::string&)) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(conv(part));
    }
    return out;
}

int cmd_experiment(const ExperimentOptions& o) {
    plxcli::ExperimentPlan plan;
    try {
        if (!o.plan_file.empty()) {
            json j = json::parse(read_file(o.plan_file), nullptr, false);
            if (j.is_discarded()) die(kExitUsage, "plan file is not valid JSON");
            plan = plxcli::ExperimentPlan::from_json(j);
        }
        if (!o.problems.empty())
            plan.problems = split_list<std::string>(o.problems,
                                                    +[](const std::string& s) { return s; });
        if (!o.modes.empty())
            plan.modes = split_list<std::string>(o.modes, +[](const std::string& s) { return s; });
        if (!o.levels.empty())
            plan.levels = split_list<double>(o.levels, +[](const std::string& s) {
                return std::stod(s);
            });
        if (!o.seeds.empty()) plan.seeds = plxcli::parse_seed_spec(o.seeds);
        if (o.population) plan.population = o.population;
        if (o.generations) plan.generations = o.generations;
        if (o.truncation_depth) plan.truncation_depth = o.truncation_depth;
        if (o.train_size) plan.train_size = o.train_size;
        if (o.test_size) plan.test_size = o.test_size;

        std::vector<plxcli::ExperimentPlan::PlannedRun> runs =
            plan.expand(library_problem_names());

        fs::create_directories(o.out_dir);
        write_file(fs::path(o.out_dir) / "plan.json", plan.to_json().dump(2) + "\n");

        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> done{0}, skipped{0};
        std::mutex io_mutex;
        std::atomic<bool> failed{false};
        std::string first_error;
        plx_status first_status = PLX_OK;

        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= runs.size() || failed.load()) return;
                const auto& r = runs[i];
                RunFiles files = run_files(o.out_dir, r.stem);
                if (fs::exists(files.result)) {
                    ++skipped;
                    std::lock_guard<std::mutex> lk(io_mutex);
                    std::cout << "skip " << r.stem << " (result exists)\n";
                    continue;
                }
                OwnedString err;
                plx_result* result = nullptr;
                plx_status st = plx_run(r.config.dump().c_str(), &result, &err.s);
                if (st != PLX_OK) {
                    std::lock_guard<std::mutex> lk(io_mutex);
                    if (!failed.exchange(true)) {
                        first_error = r.stem + ": " + err.str();
                        first_status = st;
                    }
                    return;
                }
                OwnedString result_json, log_jsonl;
                plx_result_to_json(result, &result_json.s);
                plx_result_log_jsonl(result, &log_jsonl.s);
                plx_result_free(result);
                write_file(files.result, result_json.str());
                write_file(files.log, log_jsonl.str());
                ++done;
                std::lock_guard<std::mutex> lk(io_mutex);
                std::cout << summarize(json::parse(result_json.str())) << "\n";
            }
        };

        std::vector<std::thread> pool;
        unsigned n_threads = std::max(1u, o.parallelism);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        if (failed.load()) die(status_exit(first_status), first_error);
        std::cout << "experiment complete: " << done.load() << " run(s), " << skipped.load()
                  << " skipped, results in " << o.out_dir << "\n";
        return 0;
    } catch (const plxcli::PlanError& e) {
        die(kExitUsage, e.what());
    }
}

// --- report ------------------------------------------------------------------

int cmd_report(const std::string& dir) {
    json arr = json::array();
    if (!fs::is_directory(dir)) die(kExitRuntime, "'" + dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().string().ends_with(".result.json"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        json doc = json::parse(read_file(f.string()), nullptr, false);
        if (doc.is_discarded()) die(kExitRuntime, "'" + f.string() + "' is not valid JSON");
        arr.push_back(std::move(doc));
    }
    if (arr.empty()) die(kExitRuntime, "no .result.json files in '" + dir + "'");

    OwnedString csv, table, err;
    plx_status st = plx_report(arr.dump().c_str(), &csv.s, &table.s, &err.s);
    if (st != PLX_OK) die(status_exit(st), "report failed: " + err.str());

    write_file(fs::path(dir) / "report.csv", csv.str());
    write_file(fs::path(dir) / "report.txt", table.str());
    std::cout << table.str();
    std::cout << "wrote " << (fs::path(dir) / "report.csv").string() << " and "
              << (fs::path(dir) / "report.txt").string() << "\n";
    return 0;
}

// --- simplify ------------------------------------------------------------------

int cmd_simplify(const std::string& genome_file, const std::string& problem,
                 std::uint64_t steps, std::uint64_t seed, const std::string& out_file) {
    std::string genome = read_file(genome_file);
    OwnedString out, err;
    plx_status st = plx_simplify(genome.c_str(), problem.c_str(), steps, seed, &out.s, &err.s);
    if (st != PLX_OK) die(status_exit(st), "simplify failed: " + err.str());
    if (out_file.empty()) {
        std::cout << out.str() << "\n";
    } else {
        write_file(out_file, out.str() + "\n");
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pushlex: lexicase-selection genetic programming engine (library v" +
                 std::string(plx_version()) + ")"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Execute a single evolutionary run");
    run->add_option("--problem", run_opts.problem, "Benchmark problem name")->required();
    run->add_option("--seed", run_opts.seed, "Master seed for the run");
    run->add_option("--mode", run_opts.mode,
                    "Schedule mode: full, downsample_gens, downsample_pop, static_subsample, "
                    "truncated");
    run->add_option("--d", run_opts.d, "Subsampling level in (0, 1]");
    run->add_option("--population", run_opts.population, "Base population size");
    run->add_option("--generations", run_opts.generations, "Base generation cap");
    run->add_option("--depth", run_opts.truncation_depth,
                    "Cases per selection (truncated mode)");
    run->add_option("--step-limit", run_opts.step_limit, "Interpreter steps per execution");
    run->add_option("--umad-rate", run_opts.umad_rate, "UMAD addition rate");
    run->add_option("--simplify-steps", run_opts.simplify_steps,
                    "Simplification steps applied to a found solution");
    run->add_option("--train-size", run_opts.train_size, "Training set size (0 = default)");
    run->add_option("--test-size", run_opts.test_size, "Test set size (0 = 10x training)");
    run->add_option("--cases", run_opts.cases_file, "JSON Lines file with training cases");
    run->add_option("--out", run_opts.out_dir, "Output directory (default: runs or $PUSHLEX_OUT)");

    ExperimentOptions exp_opts;
    auto* exp = app.add_subcommand("experiment", "Run a sweep over problems/modes/levels/seeds");
    exp->add_option("--plan", exp_opts.plan_file, "Plan file (JSON)");
    exp->add_option("--problems", exp_opts.problems, "Comma-separated problem names");
    exp->add_option("--modes", exp_opts.modes, "Comma-separated schedule modes");
    exp->add_option("--levels", exp_opts.levels, "Comma-separated subsampling levels");
    exp->add_option("--seeds", exp_opts.seeds, "Seed spec, e.g. 0..19 or 0,3,7");
    exp->add_option("--population", exp_opts.population, "Base population size");
    exp->add_option("--generations", exp_opts.generations, "Base generation cap");
    exp->add_option("--depth", exp_opts.truncation_depth, "Cases per selection (truncated)");
    exp->add_option("--train-size", exp_opts.train_size, "Training set size (0 = default)");
    exp->add_option("--test-size", exp_opts.test_size, "Test set size (0 = 10x training)");
    exp->add_option("--parallel", exp_opts.parallelism, "Concurrent runs");
    exp->add_option("--out", exp_opts.out_dir, "Output directory (default: runs or $PUSHLEX_OUT)");

    std::string report_dir = default_out_dir();
    auto* rep = app.add_subcommand("report", "Aggregate run results into tables");
    rep->add_option("--dir", report_dir, "Directory of .result.json files");

    std::string sim_genome, sim_problem, sim_out;
    std::uint64_t sim_steps = 1000, sim_seed = 0;
    auto* sim = app.add_subcommand("simplify", "Simplify a genome against a problem");
    sim->add_option("--genome", sim_genome, "Genome JSON file")->required();
    sim->add_option("--problem", sim_problem, "Problem name")->required();
    sim->add_option("--steps", sim_steps, "Hill-climbing steps");
    sim->add_option("--seed", sim_seed, "Seed for the training set and deletions");
    sim->add_option("--out", sim_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "pushlex: " << e.what() << "\n";
        return kExitUsage;
    }

    if (run->parsed()) return cmd_run(run_opts);
    if (exp->parsed()) return cmd_experiment(exp_opts);
    if (rep->parsed()) return cmd_report(report_dir);
    if (sim->parsed()) return cmd_simplify(sim_genome, sim_problem, sim_steps, sim_seed, sim_out);
    return kExitUsage;
}
