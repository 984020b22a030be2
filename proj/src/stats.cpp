#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace pushlex {

namespace {

// Series expansion of the lower regularized gamma P(a, x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) fail(ErrorCode::invalid_argument, "gamma Q requires a > 0");
    if (x < 0.0) fail(ErrorCode::invalid_argument, "gamma Q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_squared_sf(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

Chi2Result chi_square_2x2(std::uint64_t succ_a, std::uint64_t total_a, std::uint64_t succ_b,
                          std::uint64_t total_b, bool yates) {
    if (total_a < 1 || total_b < 1) fail(ErrorCode::invalid_argument, "totals must be >= 1");
    if (succ_a > total_a || succ_b > total_b)
        fail(ErrorCode::invalid_argument, "successes cannot exceed totals");

    const double a = static_cast<double>(succ_a);
    const double b = static_cast<double>(total_a - succ_a);
    const double c = static_cast<double>(succ_b);
    const double d = static_cast<double>(total_b - succ_b);
    const double n = a + b + c + d;
    const double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;

    Chi2Result res;
    if (r1 == 0.0 || r2 == 0.0 || c1 == 0.0 || c2 == 0.0) {
        res.degenerate = true;
        return res; // statistic 0, p = 1 by convention
    }
    double num = std::fabs(a * d - b * c);
    if (yates) num = std::max(0.0, num - n / 2.0);
    res.statistic = n * num * num / (r1 * r2 * c1 * c2);
    res.p_value = chi_squared_sf(res.statistic, 1.0);
    return res;
}

std::vector<bool> holm_correct(std::span<const double> p_values, double alpha) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(p_values[i] >= 0.0 && p_values[i] <= 1.0))
            fail(ErrorCode::invalid_argument, "p-values must lie in [0, 1]");
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return p_values[x] < p_values[y]; });

    std::vector<bool> reject(m, false);
    for (std::size_t rank = 0; rank < m; ++rank) {
        double threshold = alpha / static_cast<double>(m - rank);
        if (p_values[order[rank]] <= threshold) {
            reject[order[rank]] = true;
        } else {
            break; // step-down: every later (larger) p-value is retained too
        }
    }
    return reject;
}

std::optional<double> generalization_rate(std::uint64_t generalized,
                                          std::uint64_t train_passing) {
    if (train_passing == 0) return std::nullopt;
    return static_cast<double>(generalized) / static_cast<double>(train_passing);
}

std::vector<double> mean_ranks(const std::vector<std::vector<double>>& successes_by_problem,
                               const std::vector<bool>& excluded) {
    if (successes_by_problem.empty())
        fail(ErrorCode::invalid_argument, "mean_ranks requires at least one problem");
    const std::size_t n_methods = successes_by_problem[0].size();
    if (n_methods < 2) fail(ErrorCode::invalid_argument, "mean_ranks requires >= 2 methods");

    std::vector<double> sum(n_methods, 0.0);
    std::size_t counted = 0;
    for (std::size_t p = 0; p < successes_by_problem.size(); ++p) {
        if (p < excluded.size() && excluded[p]) continue;
        const auto& row = successes_by_problem[p];
        if (row.size() != n_methods)
            fail(ErrorCode::invalid_argument, "ragged success table");
        // Rank descending by successes; tied methods share the average rank.
        std::vector<std::size_t> order(n_methods);
        for (std::size_t i = 0; i < n_methods; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return row[x] > row[y]; });
        std::size_t i = 0;
        while (i < n_methods) {
            std::size_t j = i;
            while (j + 1 < n_methods && row[order[j + 1]] == row[order[i]]) ++j;
            double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t k = i; k <= j; ++k) sum[order[k]] += avg_rank;
            i = j + 1;
        }
        ++counted;
    }
    if (counted == 0) fail(ErrorCode::invalid_argument, "all problems excluded");
    for (double& s : sum) s /= static_cast<double>(counted);
    return sum;
}

// ---------------------------------------------------------------------------

namespace {

std::string format_d(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

std::string format_rate(const std::optional<double>& r) {
    if (!r) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << *r;
    return os.str();
}

} // namespace

ExperimentSummary ExperimentSummary::from_results(const std::vector<nlohmann::json>& results,
                                                  double alpha) {
    ExperimentSummary s;
    s.alpha = alpha;
    std::map<std::string, std::map<std::string, MethodCell>> grid;
    std::set<std::string> method_set;
    for (const auto& r : results) {
        if (!r.is_object() || !r.contains("problem") || !r.contains("mode") || !r.contains("d"))
            fail(ErrorCode::parse, "run result document lacks problem/mode/d fields");
        std::string prob = r.at("problem").get<std::string>();
        std::string method =
            r.at("mode").get<std::string>() + "@" + format_d(r.at("d").get<double>());
        MethodCell& cell = grid[prob][method];
        cell.total += 1;
        if (r.value("success", false)) cell.train_passing += 1;
        if (r.value("generalized", false)) cell.successes += 1;
        method_set.insert(method);
    }
    for (const auto& [prob, row] : grid) s.problems.push_back(prob);
    s.methods.assign(method_set.begin(), method_set.end());
    s.cells.resize(s.problems.size());
    for (std::size_t p = 0; p < s.problems.size(); ++p) {
        s.cells[p].resize(s.methods.size());
        for (std::size_t m = 0; m < s.methods.size(); ++m) {
            auto it = grid[s.problems[p]].find(s.methods[m]);
            if (it != grid[s.problems[p]].end()) s.cells[p][m] = it->second;
        }
    }

    // Pairwise chi-squared per problem; Holm correction across the pairs of
    // one problem when more than two methods are present.
    for (std::size_t p = 0; p < s.problems.size(); ++p) {
        std::vector<PairwiseTest> family;
        std::vector<double> ps;
        for (std::size_t i = 0; i < s.methods.size(); ++i) {
            for (std::size_t j = i + 1; j < s.methods.size(); ++j) {
                const MethodCell& a = s.cells[p][i];
                const MethodCell& b = s.cells[p][j];
                if (a.total == 0 || b.total == 0) continue;
                PairwiseTest t;
                t.problem = s.problems[p];
                t.method_a = s.methods[i];
                t.method_b = s.methods[j];
                t.chi2 = chi_square_2x2(a.successes, a.total, b.successes, b.total);
                family.push_back(std::move(t));
                ps.push_back(family.back().chi2.p_value);
            }
        }
        if (family.empty()) continue;
        if (s.methods.size() > 2) {
            std::vector<bool> reject = holm_correct(ps, alpha);
            for (std::size_t k = 0; k < family.size(); ++k) family[k].significant = reject[k];
        } else {
            for (auto& t : family) t.significant = t.chi2.p_value <= alpha;
        }
        for (auto& t : family) s.tests.push_back(std::move(t));
    }
    return s;
}

std::string ExperimentSummary::to_csv() const {
    std::string out = "problem,method,successes,train_passing,total,generalization_rate\n";
    for (std::size_t p = 0; p < problems.size(); ++p) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const MethodCell& c = cells[p][m];
            if (c.total == 0) continue;
            out += problems[p] + "," + methods[m] + "," + std::to_string(c.successes) + "," +
                   std::to_string(c.train_passing) + "," + std::to_string(c.total) + "," +
                   format_rate(generalization_rate(c.successes, c.train_passing)) + "\n";
        }
    }
    return out;
}

std::string ExperimentSummary::to_table() const {
    // A method earns "*" on a problem when it is the better side of a
    // significant pairwise difference.
    std::map<std::string, std::set<std::string>> starred;
    for (const auto& t : tests) {
        if (!t.significant) continue;
        std::size_t p = static_cast<std::size_t>(
            std::find(problems.begin(), problems.end(), t.problem) - problems.begin());
        std::size_t ia = static_cast<std::size_t>(
            std::find(methods.begin(), methods.end(), t.method_a) - methods.begin());
        std::size_t ib = static_cast<std::size_t>(
            std::find(methods.begin(), methods.end(), t.method_b) - methods.begin());
        const auto& a = cells[p][ia];
        const auto& b = cells[p][ib];
        starred[t.problem].insert(a.successes >= b.successes ? t.method_a : t.method_b);
    }

    auto cell_text = [&](std::size_t p, std::size_t m) {
        const MethodCell& c = cells[p][m];
        if (c.total == 0) return std::string("-");
        std::string cell = std::to_string(c.successes) + "/" + std::to_string(c.total);
        cell += " (" + format_rate(generalization_rate(c.successes, c.train_passing)) + ")";
        if (starred[problems[p]].contains(methods[m])) cell += "*";
        return cell;
    };

    std::size_t name_w = 9; // "mean rank"
    for (const auto& p : problems) name_w = std::max(name_w, p.size());
    std::vector<std::size_t> col_w(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        col_w[m] = std::max<std::size_t>(methods[m].size(), 6);
        for (std::size_t p = 0; p < problems.size(); ++p)
            col_w[m] = std::max(col_w[m], cell_text(p, m).size());
    }

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(name_w + 2)) << "problem";
    for (std::size_t m = 0; m < methods.size(); ++m)
        os << std::right << std::setw(static_cast<int>(col_w[m] + 2)) << methods[m];
    os << "\n";

    for (std::size_t p = 0; p < problems.size(); ++p) {
        os << std::left << std::setw(static_cast<int>(name_w + 2)) << problems[p];
        for (std::size_t m = 0; m < methods.size(); ++m)
            os << std::right << std::setw(static_cast<int>(col_w[m] + 2)) << cell_text(p, m);
        os << "\n";
    }

    if (methods.size() >= 2 && problems.size() >= 1) {
        std::vector<std::vector<double>> table(problems.size(),
                                               std::vector<double>(methods.size(), 0.0));
        bool complete = true;
        for (std::size_t p = 0; p < problems.size(); ++p)
            for (std::size_t m = 0; m < methods.size(); ++m) {
                if (cells[p][m].total == 0) complete = false;
                table[p][m] = static_cast<double>(cells[p][m].successes);
            }
        if (complete) {
            std::vector<double> mr = mean_ranks(table);
            os << std::left << std::setw(static_cast<int>(name_w + 2)) << "mean rank";
            for (std::size_t m = 0; m < methods.size(); ++m) {
                std::ostringstream v;
                v << std::fixed << std::setprecision(1) << mr[m];
                os << std::right << std::setw(static_cast<int>(col_w[m] + 2)) << v.str();
            }
            os << "\n";
        }
    }
    return os.str();
}

} // namespace pushlex
