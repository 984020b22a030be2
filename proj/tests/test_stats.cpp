#include <doctest.h>

#include "errors.hpp"

#include <cmath>
#include <random>

#include "stats.hpp"

using namespace pushlex;

TEST_SUITE("stats") {

TEST_CASE("chi-squared: identical proportions give statistic 0 and p = 1") {
    Chi2Result r = chi_square_2x2(50, 100, 50, 100);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("chi-squared against reference values computed with an independent oracle") {
    // Frozen from scipy.stats.chi2_contingency(correction=False).
    struct Case {
        std::uint64_t sa, ta, sb, tb;
        double stat, p;
    };
    const Case cases[] = {
        {74, 100, 25, 100, 48.02480248024802, 4.208615521279269e-12},
        {15, 20, 18, 20, 1.5584415584415584, 0.21189355203127455},
        {9, 10, 3, 10, 7.5, 0.0061698993205441645},
        {1, 10, 0, 10, 1.0526315789473684, 0.30490178817878544},
    };
    for (const auto& c : cases) {
        CAPTURE(c.sa);
        Chi2Result r = chi_square_2x2(c.sa, c.ta, c.sb, c.tb);
        CHECK(r.statistic == doctest::Approx(c.stat).epsilon(1e-10));
        CHECK(r.p_value == doctest::Approx(c.p).epsilon(1e-6));
    }
}

TEST_CASE("the Fizz Buzz row (74 vs 25 of 100) is significant at alpha = 0.05") {
    Chi2Result r = chi_square_2x2(74, 100, 25, 100);
    CHECK(r.p_value < 0.05);
    CHECK(r.p_value < 1e-8);
    // 4 significant figures against the frozen oracle value 48.02
    CHECK(r.statistic == doctest::Approx(48.02480248).epsilon(1e-6));
}

TEST_CASE("chi-squared symmetry: swapping groups changes nothing") {
    Chi2Result a = chi_square_2x2(30, 50, 12, 40);
    Chi2Result b = chi_square_2x2(12, 40, 30, 50);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-14));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-14));
}

TEST_CASE("chi-squared monotonicity: widening the gap never lowers the statistic") {
    double prev = -1.0;
    for (std::uint64_t k = 50; k <= 100; k += 5) {
        Chi2Result r = chi_square_2x2(k, 100, 50, 100);
        CHECK(r.statistic >= prev);
        prev = r.statistic;
    }
}

TEST_CASE("degenerate marginals are flagged and give p = 1") {
    Chi2Result r = chi_square_2x2(0, 10, 0, 10); // no successes anywhere
    CHECK(r.degenerate);
    CHECK(r.p_value == 1.0);
    Chi2Result r2 = chi_square_2x2(10, 10, 10, 10); // no failures anywhere
    CHECK(r2.degenerate);
    CHECK(r2.p_value == 1.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)chi_square_2x2(5, 0, 1, 10), Error);
    CHECK_THROWS_AS((void)chi_square_2x2(11, 10, 1, 10), Error);
}

TEST_CASE("gamma Q agrees with the erfc identity for half-integer shape") {
    // Q(1/2, x/2) = erfc(sqrt(x/2)): an independent route to the same tail.
    for (double x : {0.001, 0.5, 1.0, 3.84, 10.0, 48.02, 100.0}) {
        CAPTURE(x);
        double via_gamma = regularized_gamma_q(0.5, x / 2.0);
        double via_erfc = std::erfc(std::sqrt(x / 2.0));
        CHECK(via_gamma == doctest::Approx(via_erfc).epsilon(1e-10));
    }
}

TEST_CASE("holm correction examples") {
    SUBCASE("a single p-value reduces to the raw comparison") {
        std::vector<double> p{0.03};
        auto flags = holm_correct(p, 0.05);
        CHECK(flags == std::vector<bool>{true});
    }
    SUBCASE("(0.01, 0.04) at alpha 0.05 rejects both") {
        std::vector<double> p{0.01, 0.04};
        auto flags = holm_correct(p, 0.05);
        CHECK(flags == std::vector<bool>{true, true});
    }
    SUBCASE("step-down stops at the first retained hypothesis") {
        // 0.01 <= 0.05/3 rejects; 0.03 > 0.05/2 retains; 0.02... order matters:
        // sorted (0.01, 0.02, 0.03): 0.01<=0.0167, 0.02<=0.025, 0.03<=0.05 -> all reject
        std::vector<double> p{0.03, 0.01, 0.02};
        auto flags = holm_correct(p, 0.05);
        CHECK(flags == std::vector<bool>{true, true, true});
        // but (0.03, 0.04, 0.01): sorted 0.01<=0.0167 ok; 0.03>0.025 stops; 0.04 retained
        std::vector<double> q{0.03, 0.04, 0.01};
        auto flags2 = holm_correct(q, 0.05);
        CHECK(flags2 == std::vector<bool>{false, false, true});
    }
    SUBCASE("all p = 1 rejects nothing") {
        std::vector<double> p{1.0, 1.0, 1.0};
        auto flags = holm_correct(p, 0.05);
        CHECK(flags == std::vector<bool>{false, false, false});
    }
    SUBCASE("out-of-range p-values are rejected") {
        std::vector<double> p{1.5};
        CHECK_THROWS_AS((void)holm_correct(p, 0.05), Error);
    }
}

TEST_CASE("holm dominance: every Holm rejection is also a raw rejection") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t m = 1 + rng() % 8;
        std::vector<double> p(m);
        for (auto& x : p) x = static_cast<double>(rng() % 10000) / 10000.0;
        auto flags = holm_correct(p, 0.05);
        for (std::size_t i = 0; i < m; ++i)
            if (flags[i]) CHECK(p[i] <= 0.05);
    }
}

TEST_CASE("generalization rate follows the table conventions") {
    CHECK_FALSE(generalization_rate(0, 0).has_value()); // rendered "-"
    CHECK(generalization_rate(10, 10).value() == doctest::Approx(1.0));
    CHECK(generalization_rate(61, 100).value() == doctest::Approx(0.61));
}

TEST_CASE("mean ranks: strict dominance and tie averaging") {
    std::vector<std::vector<double>> table{{10, 5}, {9, 4}, {8, 1}};
    auto mr = mean_ranks(table);
    CHECK(mr[0] == doctest::Approx(1.0));
    CHECK(mr[1] == doctest::Approx(2.0));

    std::vector<std::vector<double>> tied{{7, 7}};
    auto mt = mean_ranks(tied);
    CHECK(mt[0] == doctest::Approx(1.5));
    CHECK(mt[1] == doctest::Approx(1.5));
}

TEST_CASE("mean ranks reproduce the eight-level benchmark footer within 0.1") {
    // Success counts per problem for subsampling levels
    // 0.01, 0.02, 0.05, 0.1, 0.175, 0.25, 0.5, 1.0; the last two problems
    // (mirror image, smallest) are excluded as in the source table.
    std::vector<std::vector<double>> counts{
        {0, 48, 38, 25, 60, 51, 40, 32},     // CSL
        {5, 85, 87, 72, 55, 50, 29, 19},     // double letters
        {94, 90, 72, 68, 61, 65, 63, 62},    // LIOZ
        {96, 84, 84, 86, 86, 82, 78, 80},    // negative to zero
        {100, 100, 99, 96, 97, 100, 93, 87}, // RSWN
        {1, 7, 18, 19, 24, 31, 28, 13},      // scrabble score
        {100, 100, 99, 96, 96, 95, 94, 94},  // SLB
        {11, 47, 48, 61, 68, 64, 54, 38},    // syllables
        {100, 100, 100, 98, 99, 97, 95, 88}, // vector average
        {25, 96, 98, 95, 94, 91, 86, 61},    // x-word lines
        {100, 100, 100, 99, 99, 99, 100, 100}, // mirror image (excluded)
        {100, 100, 100, 99, 100, 98, 100, 100}, // smallest (excluded)
    };
    std::vector<bool> excluded(12, false);
    excluded[10] = excluded[11] = true;
    auto mr = mean_ranks(counts, excluded);
    const double footer[] = {4.8, 3.2, 3.4, 4.2, 3.7, 4.0, 5.8, 7.1};
    for (std::size_t i = 0; i < 8; ++i) {
        CAPTURE(i);
        CHECK(std::abs(mr[i] - footer[i]) <= 0.1);
    }
}

TEST_CASE("experiment summary aggregates results and renders the '-' convention") {
    std::vector<nlohmann::json> results;
    auto run = [&](const std::string& prob, const std::string& mode, double d, bool success,
                   bool generalized) {
        results.push_back({{"problem", prob},
                           {"mode", mode},
                           {"d", d},
                           {"seed", results.size()},
                           {"success", success},
                           {"generalized", generalized}});
    };
    for (int i = 0; i < 10; ++i) run("smallest", "full", 1.0, true, true);
    for (int i = 0; i < 10; ++i) run("smallest", "downsample_gens", 0.25, i < 9, i < 9);
    for (int i = 0; i < 10; ++i) run("median", "full", 1.0, false, false);
    for (int i = 0; i < 10; ++i) run("median", "downsample_gens", 0.25, i < 2, i < 1);

    ExperimentSummary s = ExperimentSummary::from_results(results);
    CHECK(s.problems.size() == 2);
    CHECK(s.methods.size() == 2);

    std::string csv = s.to_csv();
    CHECK(csv.find("median,full@1,0,0,10,-") != std::string::npos);
    CHECK(csv.find("smallest,full@1,10,10,10,1.00") != std::string::npos);

    std::string table = s.to_table();
    CHECK(table.find("mean rank") != std::string::npos);
    CHECK(table.find("-") != std::string::npos);
}

TEST_CASE("pairwise tests use plain alpha for two methods") {
    std::vector<nlohmann::json> results;
    for (int i = 0; i < 100; ++i)
        results.push_back({{"problem", "p"},
                           {"mode", "downsample_gens"},
                           {"d", 0.25},
                           {"seed", i},
                           {"success", i < 74},
                           {"generalized", i < 74}});
    for (int i = 0; i < 100; ++i)
        results.push_back({{"problem", "p"},
                           {"mode", "full"},
                           {"d", 1.0},
                           {"seed", 100 + i},
                           {"success", i < 25},
                           {"generalized", i < 25}});
    ExperimentSummary s = ExperimentSummary::from_results(results);
    REQUIRE(s.tests.size() == 1);
    CHECK(s.tests[0].significant);
    CHECK(s.tests[0].chi2.statistic == doctest::Approx(48.0248).epsilon(1e-4));

    // The better side of the significant pair carries the star in the table.
    std::string table = s.to_table();
    CHECK(table.find("74/100 (1.00)*") != std::string::npos);
    CHECK(table.find("25/100 (1.00)*") == std::string::npos);
}

} // TEST_SUITE
