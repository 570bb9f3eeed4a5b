#include <doctest.h>

#include <random>

#include "shp/errors.hpp"
#include "shp/metrics.hpp"

using namespace shp::metrics;

TEST_CASE("caf") {
    CHECK(caf(2, 0, 0) == doctest::Approx(2.0));
    CHECK(caf(4, 0, 0) == doctest::Approx(4.0));
    CHECK(caf(8, 7, 0) == doctest::Approx(8.0 / 7.0));
    CHECK(caf(8, 7, 0) > 1.0);
    // Strictly decreasing in m and s, increasing in n.
    CHECK(caf(4, 2, 0) > caf(4, 4, 0));
    CHECK(caf(4, 2, 1) > caf(4, 2, 2));
    CHECK(caf(8, 2, 0) > caf(4, 2, 0));
    CHECK_THROWS_AS(caf(0, 0, 0), shp::InvalidParameter);
}

TEST_CASE("expected attempts and bits per attempt") {
    CHECK(expected_attempts(8) == doctest::Approx(256.0));
    CHECK(expected_attempts(2) == doctest::Approx(4.0));
    CHECK(expected_attempts(0) == doctest::Approx(1.0));
    CHECK(expected_bits_per_attempt(2) == doctest::Approx(0.5));
    CHECK(expected_bits_per_attempt(8) == doctest::Approx(0.03125));
    // Maximized over integers at n in {1, 2}.
    for (int n = 3; n <= 16; ++n)
        CHECK(expected_bits_per_attempt(n) < expected_bits_per_attempt(1));
    CHECK(expected_bits_per_attempt(1) == doctest::Approx(expected_bits_per_attempt(2)));
}

TEST_CASE("phi ratio") {
    CHECK(phi_ratio(0.415, 2) == doctest::Approx(0.83));
    CHECK(phi_ratio(expected_bits_per_attempt(4), 4) == doctest::Approx(1.0));
}

TEST_CASE("fitness piecewise") {
    CHECK(fitness(0.9, 10.0, 100, 100) == 0.0);
    CHECK(fitness(2.0, 2.0, 95, 100) == doctest::Approx(1.9));
    CHECK(fitness(2.0, 3.5, 70, 70) == doctest::Approx(3.5));
    CHECK(fitness(2.0, 3.5, 0, 70) == 0.0);
    CHECK(fitness(2.0, 3.5, 0, 0) == 0.0);
    // fitness <= bps always.
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
        const double c = 0.5 + (rng() % 100) / 10.0;
        const double bps = (rng() % 1000) / 7.0;
        const std::uint64_t npr = rng() % 500;
        const std::uint64_t necc = npr == 0 ? 0 : rng() % (npr + 1);
        CHECK(fitness(c, bps, necc, npr) <= bps + 1e-12);
    }
}

TEST_CASE("sbw") {
    auto v = sbw(1000000, 1000.0);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(1000.0));
    CHECK_FALSE(sbw(1000000, 0.0).has_value());
    auto doubled = sbw(2000000, 1000.0);
    CHECK(*doubled == doctest::Approx(2.0 * *v));
}

TEST_CASE("Monte-Carlo geometric agreement: mean POIs-per-match ~ 2^n within 5%") {
    std::mt19937_64 rng(1234);
    for (int n : {2, 3, 4, 8}) {
        const double p = 1.0 / expected_attempts(n);
        constexpr int kTrials = 1000000;
        std::uint64_t attempts = 0, successes = 0;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < kTrials; ++i) {
            ++attempts;
            successes += unit(rng) < p;
        }
        REQUIRE(successes > 0);
        const double mean = static_cast<double>(attempts) / static_cast<double>(successes);
        CHECK(mean > expected_attempts(n) * 0.95);
        CHECK(mean < expected_attempts(n) * 1.05);
    }
}
