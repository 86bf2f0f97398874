#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedindep/variance.hpp"
#include "support/test_helpers.hpp"

using namespace mixedindep;
using mi_test::random_sample;
using mi_test::random_weights;

TEST_CASE("sigma_hat hand value and edge cases") {
    const auto wp = WeightParams::scalar(1.0, 1.0);
    SECTION("reference sample gives 1/5184") {
        const MixedSample s({1.0, 2.0}, {0, 1}, 1, 1);
        REQUIRE(sigma_hat(s, wp, Mode::two_vector) ==
                Catch::Approx(1.0 / 5184.0).margin(1e-18));
    }
    SECTION("constant continuous column gives zero") {
        const MixedSample s({1.5, 1.5, 1.5}, {0, 1, 2}, 1, 1);
        REQUIRE(sigma_hat(s, wp, Mode::two_vector) == 0.0);
    }
    SECTION("n < 2 rejected") {
        const MixedSample s({1.0}, {1}, 1, 1);
        REQUIRE_THROWS_AS(sigma_hat(s, wp, Mode::two_vector), DimensionError);
    }
    SECTION("nonnegative, zero iff a transformed column is constant") {
        Rng rng(3);
        for (int rep = 0; rep < 40; ++rep) {
            const auto s = random_sample(rng, 2 + rep % 8, 1 + rep % 2, 1 + (rep / 2) % 2);
            const auto w = random_weights(rng, s.r1(), s.r2());
            for (Mode mode : {Mode::two_vector, Mode::total}) {
                REQUIRE(sigma_hat(s, w, mode) >= 0.0);
            }
        }
    }
    SECTION("total mode reduces to the two_vector product for scalars") {
        Rng rng(5);
        for (int rep = 0; rep < 25; ++rep) {
            const auto s = random_sample(rng, 2 + rep % 8, 1, 1);
            const auto w = random_weights(rng, 1, 1);
            // equal up to cancellation noise in the expanded moment formula
            REQUIRE(sigma_hat(s, w, Mode::total) ==
                    Catch::Approx(sigma_hat(s, w, Mode::two_vector))
                        .epsilon(1e-12)
                        .margin(1e-14));
        }
    }
}

TEST_CASE("total-mode moment expansion reduces to Var*Var at r1=r2=1") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const double m1x = rng.uniform(0.1, 0.9);
        const double vx = rng.uniform(0.001, 0.2);
        const double m1y = rng.uniform(0.1, 0.9);
        const double vy = rng.uniform(0.001, 0.2);
        const double out = var_detail::sigma_sq_total_from_moments(
            {m1x}, {m1x * m1x + vx}, {m1y}, {m1y * m1y + vy});
        REQUIRE(out == Catch::Approx(vx * vy).margin(1e-12));
    }
}

TEST_CASE("covariance kernel values and symmetry") {
    const auto mx = AnalyticMarginal::exponential(1.5);
    const auto my = AnalyticMarginal::poisson(2.0);
    SECTION("vanishes when s1 = s2 = 0 or t1 = t2 = 1") {
        REQUIRE(cov_kernel(mx, my, {{0.0}, {0.3}}, {{0.0}, {0.8}}, Mode::two_vector) == 0.0);
        REQUIRE(cov_kernel(mx, my, {{1.0}, {1.0}}, {{2.0}, {1.0}}, Mode::two_vector) == 0.0);
    }
    SECTION("hand value at s=1, t=0.5") {
        const double expected = (std::exp(-1.5) - std::exp(-2.0)) * (3.0 / 7.0 - 0.36);
        REQUIRE(expected == Catch::Approx(0.0060201).margin(5e-7));
        REQUIRE(cov_kernel(mx, my, {{1.0}, {0.5}}, {{1.0}, {0.5}}, Mode::two_vector) ==
                Catch::Approx(expected).epsilon(1e-12));
    }
    SECTION("symmetric and nonnegative on the diagonal") {
        Rng rng(11);
        for (int rep = 0; rep < 50; ++rep) {
            const TransformPoint p1{{rng.uniform(0.0, 3.0)}, {rng.uniform01()}};
            const TransformPoint p2{{rng.uniform(0.0, 3.0)}, {rng.uniform01()}};
            for (Mode mode : {Mode::two_vector, Mode::total}) {
                REQUIRE(cov_kernel(mx, my, p1, p2, mode) == cov_kernel(mx, my, p2, p1, mode));
                REQUIRE(cov_kernel(mx, my, p1, p1, mode) >= -1e-15);
            }
        }
    }
    SECTION("unsupported family combinations are rejected") {
        REQUIRE_THROWS_AS(cov_kernel(my, my, {{1.0}, {0.5}}, {{1.0}, {0.5}}, Mode::two_vector),
                          InvariantError);
    }
}

TEST_CASE("sigma_sq oracle: quadrature matches analytic moments") {
    const auto mx = AnalyticMarginal::exponential(1.5);
    const auto my = AnalyticMarginal::poisson(2.0);
    const auto wp = WeightParams::scalar(2.0, 1.0);
    const double truth = sigma_sq_true(mx, my, wp, Mode::two_vector);
    const double quad = sigma_sq_by_quadrature(mx, my, wp, Mode::two_vector, 48);
    REQUIRE(std::abs(quad - truth) <= 1e-5 * truth);
}

TEST_CASE("sigma_sq quadrature: total equals two_vector at r1=r2=1") {
    const auto mx = AnalyticMarginal::exponential(1.5);
    const auto my = AnalyticMarginal::poisson(2.0);
    const auto wp = WeightParams::scalar(1.0, 2.0);
    const double tv = sigma_sq_by_quadrature(mx, my, wp, Mode::two_vector, 32);
    const double tot = sigma_sq_by_quadrature(mx, my, wp, Mode::total, 32);
    REQUIRE(tot == Catch::Approx(tv).epsilon(1e-10));
}

TEST_CASE("sigma_sq vanishes as the weight concentrates (a -> infinity)") {
    const auto mx = AnalyticMarginal::exponential(1.5);
    const auto my = AnalyticMarginal::poisson(2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {1.0, 3.0, 9.0, 27.0}) {
        const auto wp = WeightParams::scalar(a, 1.0);
        const double v = sigma_sq_by_quadrature(mx, my, wp, Mode::two_vector, 32);
        REQUIRE(v < prev);
        prev = v;
    }
    REQUIRE(prev < 1e-6);
}

TEST_CASE("analytic recip moments agree with simple checks") {
    // Exponential(1): E[1/(X+1)] = e * E1(1) (numerically ~0.596347)
    const double m1 = analytic_recip_moment(AnalyticMarginal::exponential(1.0), 1.0, 1);
    REQUIRE(m1 == Catch::Approx(0.596347362323194).epsilon(1e-9));
    // Poisson(2): E[1/(Y+1)] = (1 - e^-2)/2
    const double p1 = analytic_recip_moment(AnalyticMarginal::poisson(2.0), 1.0, 1);
    REQUIRE(p1 == Catch::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-12));
}
