#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "techrank/metrics.hpp"

using namespace techrank;

namespace {

Ranking ranking_of(std::vector<std::pair<std::string, double>> weights) {
    return weights_to_ranking(std::move(weights));
}

// 6*sum(d^2) shortcut, valid only for tie-free rankings
double shortcut_rho(const std::vector<double>& a, const std::vector<double>& b) {
    double sum_d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum_d2 += d * d;
    }
    double n = static_cast<double>(a.size());
    return 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
}

}  // namespace

TEST_CASE("weights_to_ranking sorts descending and averages ties") {
    SUBCASE("distinct weights") {
        auto r = ranking_of({{"A", 0.5}, {"B", 0.3}, {"C", 0.2}});
        REQUIRE(r.entries.size() == 3);
        CHECK(r.entries[0].label == "A");
        CHECK(r.entries[0].rank == 1.0);
        CHECK(r.entries[1].rank == 2.0);
        CHECK(r.entries[2].rank == 3.0);
    }
    SUBCASE("two-way tie") {
        auto r = ranking_of({{"A", 0.4}, {"B", 0.4}, {"C", 0.2}});
        CHECK(r.entries[0].rank == 1.5);
        CHECK(r.entries[1].rank == 1.5);
        CHECK(r.entries[2].rank == 3.0);
    }
    SUBCASE("all tied") {
        auto r = ranking_of({{"A", 1.0}, {"B", 1.0}, {"C", 1.0}, {"D", 1.0}});
        for (const auto& entry : r.entries) CHECK(entry.rank == 2.5);
    }
    SUBCASE("ties are listed lexicographically") {
        auto r = ranking_of({{"zeta", 0.4}, {"alpha", 0.4}, {"mid", 0.6}});
        CHECK(r.entries[0].label == "mid");
        CHECK(r.entries[1].label == "alpha");
        CHECK(r.entries[2].label == "zeta");
    }
    SUBCASE("non-finite weights are rejected") {
        CHECK_THROWS_AS(ranking_of({{"A", std::nan("")}}), std::invalid_argument);
    }
}

TEST_CASE("ranking invariants over random inputs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng() % 40;
        std::vector<std::pair<std::string, double>> weights;
        for (std::size_t i = 0; i < n; ++i) {
            // coarse values so ties actually happen
            double w = static_cast<double>(rng() % 8) / 8.0;
            weights.emplace_back("e" + std::to_string(i), w);
        }
        auto forward = weights_to_ranking(weights);
        std::shuffle(weights.begin(), weights.end(), rng);
        auto shuffled = weights_to_ranking(weights);

        // permutation invariance of the input order
        REQUIRE(forward.entries.size() == shuffled.entries.size());
        for (std::size_t i = 0; i < forward.entries.size(); ++i) {
            CHECK(forward.entries[i].label == shuffled.entries[i].label);
            CHECK(forward.entries[i].rank == shuffled.entries[i].rank);
        }
        // ranks sum to n(n+1)/2
        double rank_sum = 0.0;
        for (const auto& entry : forward.entries) rank_sum += entry.rank;
        CHECK(rank_sum == static_cast<double>(n * (n + 1)) / 2.0);
        // sorted by weight descending
        for (std::size_t i = 1; i < forward.entries.size(); ++i) {
            CHECK(forward.entries[i - 1].weight >= forward.entries[i].weight);
        }
    }
}

TEST_CASE("spearman endpoints are exact") {
    auto a = ranking_of({{"A", 0.5}, {"B", 0.4}, {"C", 0.3}, {"D", 0.2}, {"E", 0.1}});
    auto reversed = ranking_of({{"A", 0.1}, {"B", 0.2}, {"C", 0.3}, {"D", 0.4}, {"E", 0.5}});
    CHECK(spearman(a, a).rho == 1.0);
    CHECK(spearman(a, reversed).rho == -1.0);
    CHECK(spearman(a, a).n_common == 5);
}

TEST_CASE("spearman matches the hand-computed fixture") {
    std::vector<std::pair<std::string, double>> a{{"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}};
    std::vector<std::pair<std::string, double>> b{{"A", 2}, {"B", 1}, {"C", 4}, {"D", 3}};
    auto correlation = spearman_ranks(a, b);
    CHECK(std::abs(correlation.rho - 0.6) <= 1e-12);  // 1 - 6*4/60
    CHECK(correlation.n_common == 4);
}

TEST_CASE("spearman is symmetric") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 3 + rng() % 20;
        std::vector<std::pair<std::string, double>> a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.emplace_back("e" + std::to_string(i), static_cast<double>(1 + rng() % n));
            b.emplace_back("e" + std::to_string(i), static_cast<double>(1 + rng() % n));
        }
        try {
            auto ab = spearman_ranks(a, b);
            auto ba = spearman_ranks(b, a);
            CHECK(ab.rho == ba.rho);
            CHECK(ab.n_common == ba.n_common);
        } catch (const ZeroVarianceError&) {
            // constant draws; nothing to compare
        }
    }
}

TEST_CASE("spearman is invariant under monotone weight transforms") {
    std::vector<std::pair<std::string, double>> weights{
        {"A", 0.43}, {"B", 0.21}, {"C", 0.17}, {"D", 0.12}, {"E", 0.07}};
    auto plain = ranking_of(weights);
    std::vector<std::pair<std::string, double>> transformed = weights;
    for (auto& [label, w] : transformed) w = std::exp(5.0 * w);  // strictly increasing
    auto cooked = ranking_of(transformed);
    std::vector<std::pair<std::string, double>> reference{
        {"A", 5}, {"B", 1}, {"C", 2}, {"D", 3}, {"E", 4}};

    std::vector<std::pair<std::string, double>> plain_ranks, cooked_ranks;
    for (const auto& e : plain.entries) plain_ranks.emplace_back(e.label, e.rank);
    for (const auto& e : cooked.entries) cooked_ranks.emplace_back(e.label, e.rank);
    CHECK(spearman_ranks(plain_ranks, reference).rho ==
          spearman_ranks(cooked_ranks, reference).rho);
}

TEST_CASE("spearman restricts to the intersection and counts exclusions") {
    std::vector<std::pair<std::string, double>> a{
        {"A", 1}, {"B", 2}, {"C", 3}, {"D", 4}};
    std::vector<std::pair<std::string, double>> b{
        {"B", 10}, {"C", 20}, {"E", 30}, {"F", 40}, {"G", 50}};
    auto correlation = spearman_ranks(a, b);
    CHECK(correlation.n_common == 2);
    CHECK(correlation.only_in_first == 2);
    CHECK(correlation.only_in_second == 3);
    CHECK(correlation.rho == 1.0);  // B before C on both sides
}

TEST_CASE("gapped baseline ranks are re-ranked before correlating") {
    // baseline (1,5,9) is a strictly increasing relabeling of (1,2,3)
    std::vector<std::pair<std::string, double>> a{{"A", 1}, {"B", 2}, {"C", 3}};
    std::vector<std::pair<std::string, double>> gapped{{"A", 1}, {"B", 5}, {"C", 9}};
    CHECK(spearman_ranks(a, gapped).rho == 1.0);
    // non-affine gaps must not change rho either
    std::vector<std::pair<std::string, double>> crooked{{"A", 1}, {"B", 2}, {"C", 900}};
    CHECK(spearman_ranks(a, crooked).rho == 1.0);
}

TEST_CASE("spearman error cases") {
    std::vector<std::pair<std::string, double>> a{{"A", 1}, {"B", 2}};
    std::vector<std::pair<std::string, double>> disjoint{{"X", 1}, {"Y", 2}};
    CHECK_THROWS_AS(spearman_ranks(a, disjoint), InsufficientOverlapError);

    std::vector<std::pair<std::string, double>> one_common{{"A", 1}, {"Z", 2}};
    CHECK_THROWS_AS(spearman_ranks(a, one_common), InsufficientOverlapError);

    std::vector<std::pair<std::string, double>> tied{{"A", 1}, {"B", 1}};
    CHECK_THROWS_AS(spearman_ranks(a, tied), ZeroVarianceError);
}

TEST_CASE("tie-free Pearson-of-ranks equals the shortcut formula") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 3 + rng() % 30;
        std::vector<double> ranks_b(n);
        for (std::size_t i = 0; i < n; ++i) ranks_b[i] = static_cast<double>(i + 1);
        std::shuffle(ranks_b.begin(), ranks_b.end(), rng);

        std::vector<std::pair<std::string, double>> a, b;
        std::vector<double> ra(n);
        for (std::size_t i = 0; i < n; ++i) {
            ra[i] = static_cast<double>(i + 1);
            a.emplace_back("e" + std::to_string(i), ra[i]);
            b.emplace_back("e" + std::to_string(i), ranks_b[i]);
        }
        auto correlation = spearman_ranks(a, b);
        CHECK(std::abs(correlation.rho - shortcut_rho(ra, ranks_b)) < 1e-12);
    }
}
