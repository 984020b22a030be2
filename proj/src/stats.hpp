#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace pushlex {

// Upper tail of the regularized incomplete gamma function Q(a, x).
double regularized_gamma_q(double a, double x);

// Survival function of the chi-squared distribution.
double chi_squared_sf(double statistic, double dof = 1.0);

struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false; // a zero row/column marginal; p fixed at 1
};

// Pearson chi-squared test on the 2x2 success/failure table, 1 degree of
// freedom. No continuity correction unless `yates` is set.
Chi2Result chi_square_2x2(std::uint64_t succ_a, std::uint64_t total_a, std::uint64_t succ_b,
                          std::uint64_t total_b, bool yates = false);

// Holm step-down correction: reject flags in input order.
std::vector<bool> holm_correct(std::span<const double> p_values, double alpha);

// generalized / train-passing; empty when nothing passed training (rendered
// as "-" in tables).
std::optional<double> generalization_rate(std::uint64_t generalized, std::uint64_t train_passing);

// Per-method mean rank over problems: methods ranked per problem by success
// count descending, ties getting the average of their ranks. `excluded`
// problems are skipped.
std::vector<double> mean_ranks(const std::vector<std::vector<double>>& successes_by_problem,
                               const std::vector<bool>& excluded = {});

// ---------------------------------------------------------------------------
// Experiment-level aggregation over RunResult documents.

struct MethodCell {
    std::uint64_t successes = 0;     // runs whose simplified solution generalized
    std::uint64_t train_passing = 0; // runs that found a full-training-set solution
    std::uint64_t total = 0;
};

struct PairwiseTest {
    std::string problem;
    std::string method_a, method_b;
    Chi2Result chi2;
    bool significant = false; // after Holm correction within the problem family
};

struct ExperimentSummary {
    std::vector<std::string> problems;            // row labels
    std::vector<std::string> methods;             // column labels, "mode@d"
    std::vector<std::vector<MethodCell>> cells;   // [problem][method]
    std::vector<PairwiseTest> tests;
    double alpha = 0.05;

    // One row per problem x method: successes, total, generalization rate.
    std::string to_csv() const;
    // Aligned text table; "*" marks a method significantly better than some
    // other method on that problem.
    std::string to_table() const;

    static ExperimentSummary from_results(const std::vector<nlohmann::json>& results,
                                          double alpha = 0.05);
};

} // namespace pushlex
