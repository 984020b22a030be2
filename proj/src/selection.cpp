#include "selection.hpp"

#include <algorithm>

#include "errors.hpp"

namespace pushlex {

ErrorMatrix ErrorMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    ErrorMatrix m;
    m.pop = rows.size();
    m.cases = rows.empty() ? 0 : rows[0].size();
    m.errors.reserve(m.pop * m.cases);
    for (const auto& row : rows) {
        if (row.size() != m.cases)
            fail(ErrorCode::invalid_argument, "error matrix rows must have equal length");
        for (double e : row) {
            if (e < 0.0) fail(ErrorCode::invalid_argument, "error values must be non-negative");
            m.errors.push_back(e);
        }
    }
    return m;
}

std::vector<std::size_t> shuffled_order(std::span<const std::size_t> cases, Rng& rng) {
    std::vector<std::size_t> order(cases.begin(), cases.end());
    fisher_yates_shuffle(order, rng);
    return order;
}

FilterResult lexicase_filter(const ErrorMatrix& m, std::span<const std::size_t> case_order) {
    if (m.pop == 0) fail(ErrorCode::invalid_argument, "empty population");
    if (case_order.empty()) fail(ErrorCode::invalid_argument, "empty case order");

    FilterResult r;
    r.survivors.resize(m.pop);
    for (std::size_t i = 0; i < m.pop; ++i) r.survivors[i] = i;

    std::vector<std::size_t> kept;
    for (std::size_t c : case_order) {
        if (c >= m.cases) fail(ErrorCode::invalid_argument, "case index out of range");
        ++r.cases_consumed;
        double best = m.at(r.survivors[0], c);
        for (std::size_t i = 1; i < r.survivors.size(); ++i)
            best = std::min(best, m.at(r.survivors[i], c));
        kept.clear();
        for (std::size_t s : r.survivors)
            if (m.at(s, c) == best) kept.push_back(s);
        r.survivors.swap(kept);
        if (r.survivors.size() == 1) break;
    }
    return r;
}

namespace {

SelectionOutcome select_with_order(const ErrorMatrix& m, std::span<const std::size_t> order,
                                   Rng& rng) {
    FilterResult f = lexicase_filter(m, order);
    SelectionOutcome out;
    out.cases_consumed = f.cases_consumed;
    if (f.survivors.size() == 1) {
        out.chosen = f.survivors[0];
        out.tie_broken = false;
    } else {
        out.chosen = f.survivors[uniform_index(rng, f.survivors.size())];
        out.tie_broken = true;
    }
    return out;
}

} // namespace

SelectionOutcome lexicase_select(const ErrorMatrix& m, std::span<const std::size_t> active_cases,
                                 Rng& rng) {
    if (active_cases.empty()) fail(ErrorCode::invalid_argument, "active case list is empty");
    std::vector<std::size_t> order = shuffled_order(active_cases, rng);
    return select_with_order(m, order, rng);
}

SelectionOutcome truncated_lexicase_select(const ErrorMatrix& m,
                                           std::span<const std::size_t> active_cases,
                                           std::size_t depth, Rng& rng) {
    if (active_cases.empty()) fail(ErrorCode::invalid_argument, "active case list is empty");
    if (depth < 1) fail(ErrorCode::invalid_argument, "truncation depth must be >= 1");
    std::vector<std::size_t> order = shuffled_order(active_cases, rng);
    if (order.size() > depth) order.resize(depth);
    return select_with_order(m, order, rng);
}

std::vector<double> selection_distribution(const ErrorMatrix& m,
                                           std::span<const std::size_t> active_cases,
                                           std::size_t enumeration_cap) {
    if (m.pop == 0) fail(ErrorCode::invalid_argument, "empty population");
    if (active_cases.empty()) fail(ErrorCode::invalid_argument, "active case list is empty");
    if (active_cases.size() > enumeration_cap)
        fail(ErrorCode::invalid_argument,
             "too many active cases to enumerate; use Monte-Carlo estimation instead");

    std::vector<std::size_t> order(active_cases.begin(), active_cases.end());
    std::sort(order.begin(), order.end());

    std::vector<double> prob(m.pop, 0.0);
    std::size_t n_orders = 0;
    do {
        FilterResult f = lexicase_filter(m, order);
        double share = 1.0 / static_cast<double>(f.survivors.size());
        for (std::size_t s : f.survivors) prob[s] += share;
        ++n_orders;
    } while (std::next_permutation(order.begin(), order.end()));

    for (double& p : prob) p /= static_cast<double>(n_orders);
    return prob;
}

} // namespace pushlex
