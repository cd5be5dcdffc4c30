#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pabo/bounce.hpp"
#include "pabo/rng.hpp"

using namespace pabo;

// Independent oracle: the closed form evaluated in extended precision,
// straight from its definition, kept separate from the implementation path.
static long double prob_oracle(long double u, long n, long double theta, long double lambda) {
    if (u <= theta) return 0.0L;
    long double a = lambda * (theta - u) / (n + 1);
    long double b = lambda * (theta - 1.0L) / (n + 1);
    return (expm1l(a)) / (expm1l(b));
}

TEST_CASE("threshold and saturation boundaries are exact") {
    BounceParams p{0.5, 5.0};
    CHECK(bounce_probability(0.5, 0, p) == 0.0);
    CHECK(bounce_probability(0.2, 3, p) == 0.0);
    CHECK(bounce_probability(0.0, 0, p) == 0.0);
    for (int n = 0; n <= 10; ++n) {
        CHECK(bounce_probability(1.0, n, p) == 1.0);
        CHECK(bounce_probability(p.theta, n, p) == 0.0);
    }
}

TEST_CASE("closed form matches the extended-precision oracle") {
    BounceParams p{0.5, 5.0};
    CHECK(bounce_probability(0.75, 0, p) ==
          doctest::Approx(0.7772998611746912).epsilon(1e-12));
    // the spec-level tolerance band
    CHECK(std::fabs(bounce_probability(0.75, 0, p) - 0.77730) < 1e-5);

    RngStream rng(5);
    for (int i = 0; i < 500; ++i) {
        double theta = rng.next_double() * 0.9;
        double lambda = 0.5 + rng.next_double() * 200.0;
        double u = theta + rng.next_double() * (1.0 - theta);
        int n = static_cast<int>(rng.next_below(8));
        BounceParams q{theta, lambda};
        double got = bounce_probability(u, n, q);
        double want = static_cast<double>(prob_oracle(u, n, theta, lambda));
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("strictly increasing in u on (theta,1]") {
    BounceParams p{0.5, 5.0};
    for (int n = 0; n < 10; ++n) {
        double prev = 0.0;
        for (int i = 1; i <= 50; ++i) {
            double u = p.theta + i * (1.0 - p.theta) / 50.0;
            double v = bounce_probability(u, n, p);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("non-increasing in n: repeat bounces get suppressed") {
    BounceParams p{0.5, 5.0};
    for (int i = 1; i < 10; ++i) {
        double u = p.theta + 0.05 * i;
        if (u > 0.95) break;
        double prev = 1.0;
        for (int n = 0; n <= 10; ++n) {
            double v = bounce_probability(u, n, p);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("large-n limit approaches the linear ramp") {
    // L'Hopital on Eq-form: P -> (theta-u)/(theta-1) as n grows
    BounceParams p{0.5, 5.0};
    CHECK(bounce_probability(0.75, 1'000'000, p) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("lambda = 0 evaluates the analytic limit") {
    BounceParams p{0.5, 0.0};
    CHECK(bounce_probability(0.5, 0, p) == 0.0);
    CHECK(bounce_probability(0.75, 0, p) == doctest::Approx(0.5));
    CHECK(bounce_probability(1.0, 0, p) == doctest::Approx(1.0));
}

TEST_CASE("huge lambda saturates without overflow") {
    BounceParams p{0.5, 1e6};
    double v = bounce_probability(0.51, 0, p);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(1.0));
    CHECK(bounce_probability(1.0, 0, p) == 1.0);
    // the lambda/(n+1) > 700 regime of a lambda sweep
    BounceParams q{0.8, 1000.0};
    for (int n = 0; n <= 5; ++n) {
        double w = bounce_probability(0.9, n, q);
        CHECK(std::isfinite(w));
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("inputs outside the declared ranges are rejected") {
    BounceParams p{0.5, 5.0};
    CHECK_THROWS(bounce_probability(-0.1, 0, p));
    CHECK_THROWS(bounce_probability(1.1, 0, p));
    CHECK_THROWS(bounce_probability(0.5, -1, p));
    CHECK_THROWS(bounce_probability(0.5, 0, BounceParams{-0.5, 5.0}));
    CHECK_THROWS(bounce_probability(0.5, 0, BounceParams{0.5, -5.0}));
}
