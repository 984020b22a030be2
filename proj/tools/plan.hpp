#pragma once

// Experiment plans for the CLI: the cartesian product of problems x schedule
// modes x subsampling levels x seeds, expanded into per-run config documents
// plus stable output file stems. Lives on the CLI side of the C API; the
// library only ever sees the expanded run configs.

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace plxcli {

class PlanError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_modes() {
    static const std::vector<std::string> modes{"full", "downsample_gens", "downsample_pop",
                                                "static_subsample", "truncated"};
    return modes;
}

// "7" -> {7}; "0..19" -> {0,...,19}; "1,4,9" -> {1,4,9}
inline std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) throw PlanError("empty seed entry in '" + spec + "'");
        auto dots = part.find("..");
        try {
            if (dots == std::string::npos) {
                seeds.push_back(std::stoull(part));
            } else {
                std::uint64_t lo = std::stoull(part.substr(0, dots));
                std::uint64_t hi = std::stoull(part.substr(dots + 2));
                if (hi < lo) throw PlanError("seed range '" + part + "' is inverted");
                for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            }
        } catch (const std::invalid_argument&) {
            throw PlanError("bad seed token '" + part + "'");
        } catch (const std::out_of_range&) {
            throw PlanError("seed token '" + part + "' out of range");
        }
    }
    if (seeds.empty()) throw PlanError("no seeds in '" + spec + "'");
    return seeds;
}

inline std::string format_level(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

struct ExperimentPlan {
    std::vector<std::string> problems;
    std::vector<std::string> modes{"full"};
    std::vector<double> levels{1.0}; // subsampling levels d
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t population = 1000;
    std::uint64_t generations = 300;
    std::uint64_t step_limit = 2000;
    double umad_addition_rate = 0.09;
    std::uint64_t truncation_depth = 0;
    std::uint64_t train_size = 0;
    std::uint64_t test_size = 0;

    nlohmann::json to_json() const {
        return {{"problems", problems},
                {"modes", modes},
                {"levels", levels},
                {"seeds", seeds},
                {"population", population},
                {"generations", generations},
                {"step_limit", step_limit},
                {"umad_addition_rate", umad_addition_rate},
                {"truncation_depth", truncation_depth},
                {"train_size", train_size},
                {"test_size", test_size}};
    }

    static ExperimentPlan from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw PlanError("plan must be a JSON object");
        static const std::set<std::string> known{
            "problems",   "modes",      "levels",           "seeds",
            "population", "generations", "step_limit",      "umad_addition_rate",
            "truncation_depth", "train_size", "test_size"};
        for (const auto& [key, _] : j.items())
            if (!known.contains(key)) throw PlanError("unknown plan key '" + key + "'");
        ExperimentPlan p;
        if (j.contains("problems")) p.problems = j.at("problems").get<std::vector<std::string>>();
        if (j.contains("modes")) p.modes = j.at("modes").get<std::vector<std::string>>();
        if (j.contains("levels")) p.levels = j.at("levels").get<std::vector<double>>();
        if (j.contains("seeds")) {
            if (j.at("seeds").is_string())
                p.seeds = parse_seed_spec(j.at("seeds").get<std::string>());
            else
                p.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        }
        p.population = j.value("population", p.population);
        p.generations = j.value("generations", p.generations);
        p.step_limit = j.value("step_limit", p.step_limit);
        p.umad_addition_rate = j.value("umad_addition_rate", p.umad_addition_rate);
        p.truncation_depth = j.value("truncation_depth", p.truncation_depth);
        p.train_size = j.value("train_size", p.train_size);
        p.test_size = j.value("test_size", p.test_size);
        return p;
    }

    struct PlannedRun {
        std::string stem; // "<problem>__<mode>__d<level>__seed<seed>"
        nlohmann::json config;
    };

    // Validates names and levels, then expands the product. Modes that do not
    // subsample (full, truncated) are planned once per problem/seed at d = 1.
    std::vector<PlannedRun> expand(const std::vector<std::string>& valid_problems) const {
        if (problems.empty()) throw PlanError("plan lists no problems (required key: problems)");
        if (modes.empty()) throw PlanError("plan lists no modes");
        if (levels.empty()) throw PlanError("plan lists no subsampling levels");
        if (seeds.empty()) throw PlanError("plan lists no seeds");
        {
            std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
            if (uniq.size() != seeds.size()) throw PlanError("plan seeds must be distinct");
        }
        for (const auto& prob : problems)
            if (std::find(valid_problems.begin(), valid_problems.end(), prob) ==
                valid_problems.end())
                throw PlanError("unknown problem '" + prob + "'");
        for (const auto& mode : modes)
            if (std::find(known_modes().begin(), known_modes().end(), mode) ==
                known_modes().end())
                throw PlanError("unknown mode '" + mode + "'");
        for (double d : levels)
            if (!(d > 0.0 && d <= 1.0))
                throw PlanError("subsampling level " + format_level(d) + " outside (0, 1]");
        if (std::find(modes.begin(), modes.end(), "truncated") != modes.end() &&
            truncation_depth < 1)
            throw PlanError("mode 'truncated' requires truncation_depth >= 1");

        std::vector<PlannedRun> runs;
        for (const auto& prob : problems) {
            for (const auto& mode : modes) {
                const bool subsampled = mode == "downsample_gens" || mode == "downsample_pop" ||
                                        mode == "static_subsample";
                std::vector<double> ds = subsampled ? levels : std::vector<double>{1.0};
                for (double d : ds) {
                    for (std::uint64_t seed : seeds) {
                        PlannedRun r;
                        r.stem = prob + "__" + mode + "__d" + format_level(d) + "__seed" +
                                 std::to_string(seed);
                        r.config = {{"problem", prob},
                                    {"mode", mode},
                                    {"d", d},
                                    {"seed", seed},
                                    {"population", population},
                                    {"generations", generations},
                                    {"step_limit", step_limit},
                                    {"umad_addition_rate", umad_addition_rate}};
                        if (mode == "truncated") r.config["truncation_depth"] = truncation_depth;
                        if (train_size) r.config["train_size"] = train_size;
                        if (test_size) r.config["test_size"] = test_size;
                        runs.push_back(std::move(r));
                    }
                }
            }
        }
        return runs;
    }
};

} // namespace plxcli
