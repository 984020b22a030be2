#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rng.hpp"

namespace pushlex {

// Population x training-case table of non-negative errors; the sole input to
// parent selection. Row = individual, column = case. 0 means the case passes.
struct ErrorMatrix {
    std::size_t pop = 0;
    std::size_t cases = 0;
    std::vector<double> errors; // row-major, pop * cases

    double at(std::size_t individual, std::size_t c) const {
        return errors[individual * cases + c];
    }
    static ErrorMatrix from_rows(const std::vector<std::vector<double>>& rows);
};

struct SelectionOutcome {
    std::size_t chosen = 0;
    std::size_t cases_consumed = 0;
    bool tie_broken = false;
};

struct FilterResult {
    std::vector<std::size_t> survivors;
    std::size_t cases_consumed = 0;
};

// Uniformly shuffled copy of the case list (Fisher-Yates).
std::vector<std::size_t> shuffled_order(std::span<const std::size_t> cases, Rng& rng);

// Keeps only rows attaining the minimum error on each case of `case_order`
// in turn; stops early once a single candidate remains. Deterministic.
FilterResult lexicase_filter(const ErrorMatrix& m, std::span<const std::size_t> case_order);

// Algorithm: shuffle the active cases, filter, then break any residual tie
// uniformly at random.
SelectionOutcome lexicase_select(const ErrorMatrix& m, std::span<const std::size_t> active_cases,
                                 Rng& rng);

// Same, but the shuffled order is truncated to min(depth, |active|) cases
// before filtering.
SelectionOutcome truncated_lexicase_select(const ErrorMatrix& m,
                                           std::span<const std::size_t> active_cases,
                                           std::size_t depth, Rng& rng);

// Exact selection probabilities by enumerating every ordering of the active
// cases (test oracle; throws Error(invalid_argument) beyond enumeration_cap).
std::vector<double> selection_distribution(const ErrorMatrix& m,
                                           std::span<const std::size_t> active_cases,
                                           std::size_t enumeration_cap = 8);

} // namespace pushlex
