// End-to-end checks of the CLI binary: exit codes, produced files, resume
// behavior. Spawns the real executable.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kCli = PUSHLEX_CLI_PATH;

int run_cmd(const std::string& args) {
    std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string capture_cmd(const std::string& args) {
    std::string out_file = "/tmp/pushlex_cli_capture.txt";
    std::string cmd = std::string(kCli) + " " + args + " >" + out_file + " 2>&1";
    if (std::system(cmd.c_str()) == -1) return {};
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("/tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits 0 and documents the subcommands") {
    CHECK(run_cmd("--help") == 0);
    std::string help = capture_cmd("--help");
    for (const char* cmd : {"run", "experiment", "report", "simplify"})
        CHECK(help.find(cmd) != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cmd("") == 1);
    CHECK(run_cmd("run") == 1);                                     // missing --problem
    CHECK(run_cmd("run --problem smallest --d 1.5 --out /tmp/x") == 1); // invariant violation
    CHECK(run_cmd("run --problem not_a_problem --out /tmp/x") == 1);
    CHECK(run_cmd("run --problem smallest --mode bogus --out /tmp/x") == 1);
    CHECK(run_cmd("frobnicate") == 1);
}

TEST_CASE("runtime failures exit with code 2") {
    CHECK(run_cmd("report --dir /nonexistent/dir") == 2);
    CHECK(run_cmd("simplify --genome /nonexistent.json --problem smallest") == 2);
}

TEST_CASE("an empty plan file is a usage error naming the missing key") {
    TempDir dir("pushlex_cli_emptyplan");
    fs::path plan = dir.path / "plan.json";
    {
        std::ofstream out(plan);
        out << "{}";
    }
    std::string msg = capture_cmd("experiment --plan " + plan.string() + " --out " +
                                  dir.path.string());
    CHECK(run_cmd("experiment --plan " + plan.string() + " --out " + dir.path.string()) == 1);
    CHECK(msg.find("problems") != std::string::npos);

    fs::path bad = dir.path / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"problems": ["smallest"], "modez": []})";
    }
    CHECK(run_cmd("experiment --plan " + bad.string() + " --out " + dir.path.string()) == 1);
}

TEST_CASE("a tiny run writes the result document and the generation log") {
    TempDir dir("pushlex_cli_run");
    int rc = run_cmd("run --problem smallest --seed 3 --population 10 --generations 2 "
                     "--train-size 10 --test-size 10 --out " + dir.path.string());
    CHECK(rc == 0);
    fs::path result = dir.path / "smallest__full__d1__seed3.result.json";
    fs::path log = dir.path / "smallest__full__d1__seed3.log.jsonl";
    REQUIRE(fs::exists(result));
    REQUIRE(fs::exists(log));

    std::ifstream in(result);
    json doc = json::parse(in);
    CHECK(doc.at("problem") == "smallest");
    CHECK(doc.at("schedule").at("execution_budget") == 10 * 10 * 2);
}

TEST_CASE("experiment sweeps expand, then resume by skipping existing results") {
    TempDir dir("pushlex_cli_exp");
    std::string args = "experiment --problems smallest --modes downsample_gens --levels 0.5 "
                       "--seeds 0..2 --population 8 --generations 2 --train-size 10 "
                       "--test-size 10 --parallel 2 --out " + dir.path.string();
    CHECK(run_cmd(args) == 0);
    int results = 0;
    for (const auto& e : fs::directory_iterator(dir.path))
        if (e.path().string().ends_with(".result.json")) ++results;
    CHECK(results == 3);
    CHECK(fs::exists(dir.path / "plan.json"));

    std::string second = capture_cmd(args);
    CHECK(second.find("skip") != std::string::npos);
    CHECK(second.find("3 skipped") != std::string::npos);
}

TEST_CASE("report aggregates a directory of results into csv and table") {
    TempDir dir("pushlex_cli_report");
    CHECK(run_cmd("experiment --problems smallest --modes full --seeds 0..1 --population 8 "
                  "--generations 1 --train-size 10 --test-size 10 --out " +
                  dir.path.string()) == 0);
    CHECK(run_cmd("report --dir " + dir.path.string()) == 0);
    REQUIRE(fs::exists(dir.path / "report.csv"));
    REQUIRE(fs::exists(dir.path / "report.txt"));
    std::ifstream in(dir.path / "report.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "problem,method,successes,train_passing,total,generalization_rate");
}

TEST_CASE("simplify reads a genome file and writes the simplified genome") {
    TempDir dir("pushlex_cli_simplify");
    json genome = json::array();
    for (const char* name : {"in1", "in2", "int_min", "in3", "int_min", "in4", "int_min",
                             "print_int", "int_pop"})
        genome.push_back({{"item", name}, {"closes", 0}});
    fs::path gpath = dir.path / "genome.json";
    {
        std::ofstream out(gpath);
        out << genome.dump();
    }
    fs::path opath = dir.path / "slim.json";
    CHECK(run_cmd("simplify --genome " + gpath.string() +
                  " --problem smallest --steps 200 --seed 1 --out " + opath.string()) == 0);
    REQUIRE(fs::exists(opath));
    std::ifstream in(opath);
    json slim = json::parse(in);
    CHECK(slim.is_array());
    CHECK(slim.size() <= genome.size());

    // Precondition violations surface as usage errors (exit 1).
    json junk = json::array({json{{"item", "int_pop"}, {"closes", 0}}});
    fs::path jpath = dir.path / "junk.json";
    {
        std::ofstream out(jpath);
        out << junk.dump();
    }
    CHECK(run_cmd("simplify --genome " + jpath.string() + " --problem smallest") == 1);
}

TEST_CASE("PUSHLEX_OUT provides the default output directory") {
    TempDir dir("pushlex_cli_env");
    std::string cmd = std::string("PUSHLEX_OUT=") + dir.path.string() + " " + kCli +
                      " run --problem smallest --seed 9 --population 8 --generations 1 "
                      "--train-size 10 --test-size 10 >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir.path / "smallest__full__d1__seed9.result.json"));
}

} // TEST_SUITE
