#include <doctest.h>

#include "plan.hpp"

using namespace plxcli;
using nlohmann::json;

namespace {
const std::vector<std::string> kProblems{"number_io", "smallest", "median",
                                         "mirror_image", "negative_to_zero",
                                         "compare_string_lengths"};
}

TEST_SUITE("plan") {

TEST_CASE("seed specs expand ranges and lists") {
    CHECK(parse_seed_spec("7") == std::vector<std::uint64_t>{7});
    CHECK(parse_seed_spec("0..3") == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(parse_seed_spec("1,4,9") == std::vector<std::uint64_t>{1, 4, 9});
    CHECK_THROWS_AS((void)parse_seed_spec("5..2"), PlanError);
    CHECK_THROWS_AS((void)parse_seed_spec("abc"), PlanError);
    CHECK_THROWS_AS((void)parse_seed_spec(""), PlanError);
}

TEST_CASE("a single problem/mode/level plan expands to one config per seed") {
    ExperimentPlan p;
    p.problems = {"smallest"};
    p.modes = {"downsample_gens"};
    p.levels = {0.25};
    p.seeds = parse_seed_spec("0..19");
    auto runs = p.expand(kProblems);
    CHECK(runs.size() == 20);
    CHECK(runs[0].stem == "smallest__downsample_gens__d0.25__seed0");
    CHECK(runs[0].config.at("d") == 0.25);
    CHECK(runs[19].config.at("seed") == 19);
}

TEST_CASE("non-subsampling modes are planned once regardless of levels") {
    ExperimentPlan p;
    p.problems = {"median"};
    p.modes = {"full", "downsample_gens"};
    p.levels = {0.05, 0.25};
    p.seeds = {1, 2};
    auto runs = p.expand(kProblems);
    // full: 2 seeds; downsample_gens: 2 levels x 2 seeds
    CHECK(runs.size() == 2 + 4);
}

TEST_CASE("plan validation points at the offending token") {
    ExperimentPlan p;
    p.problems = {"smallest"};
    p.levels = {1.5};
    try {
        (void)p.expand(kProblems);
        FAIL("expected PlanError");
    } catch (const PlanError& e) {
        CHECK(std::string(e.what()).find("1.5") != std::string::npos);
    }

    p.levels = {0.25};
    p.problems = {"unknown_prob"};
    CHECK_THROWS_AS((void)p.expand(kProblems), PlanError);

    p.problems = {"smallest"};
    p.modes = {"bogus_mode"};
    CHECK_THROWS_AS((void)p.expand(kProblems), PlanError);

    p.modes = {"truncated"}; // depth missing
    CHECK_THROWS_AS((void)p.expand(kProblems), PlanError);

    p.modes = {"full"};
    p.seeds = {3, 3};
    CHECK_THROWS_AS((void)p.expand(kProblems), PlanError);

    ExperimentPlan empty;
    CHECK_THROWS_AS((void)empty.expand(kProblems), PlanError);
}

TEST_CASE("plans round-trip through JSON") {
    ExperimentPlan p;
    p.problems = {"smallest", "median"};
    p.modes = {"downsample_gens", "full"};
    p.levels = {0.1, 0.25};
    p.seeds = {0, 1, 2};
    p.population = 200;
    p.generations = 100;
    p.truncation_depth = 10;
    p.train_size = 50;
    ExperimentPlan back = ExperimentPlan::from_json(p.to_json());
    CHECK(back.to_json() == p.to_json());
    ExperimentPlan back2 = ExperimentPlan::from_json(back.to_json());
    CHECK(back2.to_json() == p.to_json());
}

TEST_CASE("plan files reject unknown keys") {
    json j{{"problems", json::array({"smallest"})}, {"modez", json::array()}};
    CHECK_THROWS_AS((void)ExperimentPlan::from_json(j), PlanError);
}

TEST_CASE("seeds may be given as a spec string inside the plan file") {
    json j{{"problems", json::array({"smallest"})}, {"seeds", "0..4"}};
    ExperimentPlan p = ExperimentPlan::from_json(j);
    CHECK(p.seeds.size() == 5);
}

} // TEST_SUITE
