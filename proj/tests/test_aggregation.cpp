#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccabc/aggregation.hpp"
#include "ccabc/energy.hpp"
#include "ccabc/rng.hpp"

using namespace ccabc;

TEST_CASE("entropy model: single source and perfect correlation return b0") {
    AggregationParams p;
    p.b0 = 800.0;
    p.c = 10.0;
    CHECK(compressed_bits_entropy(1, 0.0, p) == 800.0);
    CHECK(compressed_bits_entropy(1, 1234.5, p) == 800.0);
    CHECK(compressed_bits_entropy(7, 0.0, p) == 800.0);
}

TEST_CASE("entropy model: s=5 at d0=c gives 3*b0") {
    AggregationParams p;
    p.b0 = 800.0;
    p.c = 10.0;
    CHECK(compressed_bits_entropy(5, 10.0, p) == doctest::Approx(2400.0).epsilon(1e-12));
}

TEST_CASE("ccabc model: single source returns b0, d0=0 keeps the (1-ln2) increment") {
    AggregationParams p;
    p.b0 = 800.0;
    p.sigma = 4.0;
    CHECK(compressed_bits_ccabc(1, 0.0, p) == 800.0);
    CHECK(compressed_bits_ccabc(1, 500.0, p) == 800.0);
    for (int s = 2; s <= 9; ++s) {
        const double want = 800.0 * (1.0 + (s - 1) * (1.0 - std::numbers::ln2));
        CHECK(compressed_bits_ccabc(s, 0.0, p) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("ccabc model: large d0 approaches s*b0") {
    AggregationParams p;
    p.b0 = 800.0;
    p.sigma = 3.0;
    for (int s : {2, 5, 20}) {
        const double d0 = 50.0 * (p.sigma + s);
        CHECK(std::abs(compressed_bits_ccabc(s, d0, p) - s * p.b0) <= 1e-10 * s * p.b0);
    }
}

TEST_CASE("property suite over random parameters") {
    Rng rng(4242);
    for (int rep = 0; rep < 10000; ++rep) {
        AggregationParams p;
        p.b0 = 1.0 + rng.next_double() * 2000.0;
        p.c = 0.1 + rng.next_double() * 50.0;
        p.sigma = 1.0 + rng.next_double() * 30.0;
        const int s = 1 + static_cast<int>(rng.next_below(40));
        const double d0 = rng.next_double() * 200.0;

        // Eq. 10: b0 <= B < s*b0, monotone in s and d0
        const double e = compressed_bits_entropy(s, d0, p);
        REQUIRE(e >= p.b0);
        REQUIRE(e < s * p.b0 + 1e-9);
        REQUIRE(compressed_bits_entropy(s + 1, d0, p) >= e);
        REQUIRE(compressed_bits_entropy(s, d0 + 1.0, p) >= e);

        // Eq. 11: monotone in d0, b0 at s=1
        const double c = compressed_bits_ccabc(s, d0, p);
        REQUIRE(compressed_bits_ccabc(s, d0 + 1.0, p) >= c);
        REQUIRE(compressed_bits_ccabc(1, d0, p) == p.b0);
    }
}

TEST_CASE("models agree at s=1 for any d0") {
    AggregationParams p;
    p.b0 = 512.0;
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double d0 = rng.next_double() * 300.0;
        CHECK(compressed_bits_entropy(1, d0, p) == 512.0);
        CHECK(compressed_bits_ccabc(1, d0, p) == 512.0);
    }
}

TEST_CASE("aggregate_at_collector basics") {
    AggregationParams p;
    p.b0 = 800.0;
    EnergyParams e;
    e.omega = 5e-9;

    SUBCASE("no incoming passes own bits through for free") {
        const auto res = aggregate_at_collector({}, 123.0, p, e);
        CHECK(res.out_bits == 123.0);
        CHECK(res.energy_j == 0.0);
    }

    SUBCASE("aggregation energy is omega per received bit") {
        std::vector<Incoming> in(4, {800.0, 2.0});
        const auto res = aggregate_at_collector(in, 800.0, p, e);
        CHECK(res.energy_j == doctest::Approx(1.6e-5).epsilon(1e-12));
        CHECK(res.out_bits == doctest::Approx(compressed_bits(5, 2.0, p)).epsilon(1e-12));
    }

    SUBCASE("compression never exceeds the raw sum when the model compresses") {
        Rng rng(99);
        for (int rep = 0; rep < 200; ++rep) {
            const int n = 1 + static_cast<int>(rng.next_below(10));
            std::vector<Incoming> in;
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double bits = p.b0 * (1.0 + rng.next_double() * 4.0);
                in.push_back({bits, rng.next_double() * 10.0});
                sum += bits;
            }
            const auto res = aggregate_at_collector(in, p.b0, p, e);
            if (res.out_bits <= (n + 1) * p.b0) CHECK(res.out_bits <= sum + p.b0);
        }
    }
}
