#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "asos/metrics.hpp"
#include "asos/rng.hpp"

using namespace asos::metrics;
using asos::RandomStream;

TEST_CASE("reproduction fitness vanishes on identical series") {
    std::vector<double> x = {100.0, 105.0, 98.0, 120.0};
    CHECK(reproduction_fitness(x, x) == 0.0);
}

TEST_CASE("reproduction fitness on the shifted fixture matches the hand computation") {
    std::vector<double> real = {100.0, 110.0, 121.0};
    std::vector<double> sim = {110.0, 120.0, 131.0};
    // hand-applied: first term = 10; real increments are 0.1 and 0.1,
    // sim increments are 10/110 and 11/120
    double term2 = std::fabs(0.1 - 10.0 / 110.0) + std::fabs(0.1 - 11.0 / 120.0);
    CHECK(reproduction_fitness(real, sim) == Catch::Approx(10.0 + term2).epsilon(1e-12));

    SECTION("w2 = 0 reduces to the mean absolute error") {
        std::vector<double> bumped = real;
        bumped[1] += 6.0;
        CHECK(reproduction_fitness(real, bumped, {1.0, 0.0}) == Catch::Approx(6.0 / 3.0));
    }
    SECTION("contract checks") {
        CHECK_THROWS_AS(reproduction_fitness(real, {1.0, 2.0}), asos::ContractError);
        CHECK_THROWS_AS(reproduction_fitness({0.0, 1.0}, {1.0, 2.0}), asos::ContractError);
    }
}

TEST_CASE("bollinger statistics on degenerate inputs") {
    BollingerConfig cfg{4, 2.0};
    SECTION("constant series has zero deviation and zero width") {
        std::vector<double> s(10, 50.0);
        auto r = bollinger(s, cfg);
        for (double v : r.sigma) CHECK(v == 0.0);
        CHECK(r.b_avg == 0.0);
    }
    SECTION("K = 0 collapses the bands onto the moving average") {
        std::vector<double> s = {1.0, 5.0, 3.0, 8.0, 2.0, 9.0};
        auto r = bollinger(s, {4, 0.0});
        for (std::size_t i = 0; i < r.ma.size(); ++i) {
            CHECK(r.upper[i] == r.ma[i]);
            CHECK(r.lower[i] == r.ma[i]);
        }
        CHECK(r.b_avg == 0.0);
    }
    SECTION("series shorter than the window is rejected") {
        CHECK_THROWS_AS(bollinger({1.0, 2.0}, cfg), asos::ContractError);
    }
}

TEST_CASE("bollinger matches a direct-definition oracle on random series") {
    RandomStream rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s;
        for (int i = 0; i < 100; ++i) s.push_back(rng.uniform(10.0, 200.0));
        int N = 3 + static_cast<int>(rng.below(10));
        double K = rng.uniform(0.5, 3.0);
        auto r = bollinger(s, {N, K});
        // oracle: windowed statistics computed straight from the definition
        std::size_t n_windows = s.size() - static_cast<std::size_t>(N) + 1;
        REQUIRE(r.ma.size() == n_windows);
        double width_sum = 0.0;
        for (std::size_t i = 0; i < n_windows; ++i) {
            double mean = 0.0;
            for (int j = 0; j < N; ++j) mean += s[i + static_cast<std::size_t>(j)];
            mean /= N;
            double var = 0.0;
            for (int j = 0; j < N; ++j) {
                double d = s[i + static_cast<std::size_t>(j)] - mean;
                var += d * d;
            }
            double sd = std::sqrt(var / N);
            CHECK(r.ma[i] == Catch::Approx(mean).margin(1e-9));
            CHECK(r.sigma[i] == Catch::Approx(sd).margin(1e-9));
            CHECK(r.upper[i] == Catch::Approx(mean + K * sd).margin(1e-9));
            CHECK(r.lower[i] == Catch::Approx(mean - K * sd).margin(1e-9));
            width_sum += 2.0 * K * sd;
        }
        CHECK(r.b_avg == Catch::Approx(width_sum / static_cast<double>(n_windows)).margin(1e-9));
    }
}

TEST_CASE("stabilization fitness combines band width and traded quantity") {
    BollingerConfig bcfg{4, 2.0};
    StabilizationConfig scfg; // lambda1 = -1, lambda2 = +1
    SECTION("zero volumes leave only the band term") {
        std::vector<double> s = {1.0, 5.0, 3.0, 8.0, 2.0, 9.0};
        std::vector<double> v(s.size(), 0.0);
        CHECK(stabilization_fitness(s, v, bcfg, scfg) ==
              Catch::Approx(-bollinger(s, bcfg).b_avg).margin(1e-12));
    }
    SECTION("constant prices leave only the volume term") {
        std::vector<double> s(8, 42.0);
        std::vector<double> v(8, 7.0);
        CHECK(stabilization_fitness(s, v, bcfg, scfg) == Catch::Approx(7.0).margin(1e-12));
    }
    SECTION("mixed fixture matches the component-wise oracle") {
        RandomStream rng(23);
        std::vector<double> s, v;
        for (int i = 0; i < 40; ++i) {
            s.push_back(rng.uniform(40.0, 60.0));
            v.push_back(std::floor(rng.uniform(0.0, 30.0)));
        }
        double vol = 0.0;
        for (double q : v) vol += q;
        vol /= static_cast<double>(v.size());
        double expected = -1.0 * bollinger(s, bcfg).b_avg + 1.0 * vol;
        CHECK(stabilization_fitness(s, v, bcfg, scfg) == Catch::Approx(expected).margin(1e-9));
    }
}

TEST_CASE("breach counting is boundary-inclusive") {
    double p0 = 100.0;
    SECTION("strictly inside prices never breach") {
        CHECK(breach_count({95.0, 100.0, 109.99}, p0, 0.9, 1.1) == 0);
    }
    SECTION("a trade exactly at the upper threshold counts") {
        CHECK(breach_count({110.0}, p0, 0.9, 1.1) == 1);
        CHECK(breach_count({90.0}, p0, 0.9, 1.1) == 1);
    }
    SECTION("both tails count") {
        CHECK(breach_count({80.0, 100.0, 120.0}, p0, 0.9, 1.1) == 2);
    }
    SECTION("widening the bounds never increases the count") {
        RandomStream rng(29);
        std::vector<double> prices;
        for (int i = 0; i < 200; ++i) prices.push_back(rng.uniform(50.0, 150.0));
        int prev = breach_count(prices, p0, 0.95, 1.05);
        for (double w : {0.9, 0.8, 0.7, 0.5}) {
            int cur = breach_count(prices, p0, w, 2.0 - w);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("solution ranking uses fitness then complexity, flagging full ties") {
    SECTION("distinct fitnesses sort by fitness alone") {
        auto r = rank_solutions({{0, 1.0, 9.0, false}, {1, 3.0, 1.0, false}, {2, 2.0, 0.0, false}});
        CHECK(r[0].candidate_id == 1);
        CHECK(r[1].candidate_id == 2);
        CHECK(r[2].candidate_id == 0);
    }
    SECTION("equal fitness prefers the simpler solution") {
        auto r = rank_solutions({{0, 5.0, 6.0, false}, {1, 5.0, 2.0, false}});
        CHECK(r[0].candidate_id == 1);
        CHECK_FALSE(r[0].needs_expert_review);
    }
    SECTION("full ties surface for expert review") {
        auto r = rank_solutions({{0, 5.0, 2.0, false}, {1, 5.0, 2.0, false}});
        CHECK(r[0].needs_expert_review);
        CHECK(r[1].needs_expert_review);
    }
}
