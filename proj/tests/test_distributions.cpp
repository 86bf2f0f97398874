#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedindep/distributions.hpp"
#include "mixedindep/rng.hpp"

using namespace mixedindep;

TEST_CASE("exponential quantile is the analytic inverse") {
    const auto e = MarginalSpec::exponential(1.5);
    REQUIRE(e.quantile(1.0 - std::exp(-1.5)) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(e.quantile(0.0), InvariantError);
    REQUIRE_THROWS_AS(e.quantile(1.0), InvariantError);
}

TEST_CASE("gamma quantile inverts the gamma cdf to 1e-12") {
    const auto g = MarginalSpec::gamma(5.0, 1.0);
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const double u = rng.uniform01();
        const double x = g.quantile(u);
        REQUIRE(math::gamma_p(5.0, x) == Catch::Approx(u).epsilon(1e-10).margin(1e-13));
    }
    // rate scaling: gamma(2, 3) = gamma(2, 1)/3
    const auto g1 = MarginalSpec::gamma(2.0, 1.0);
    const auto g3 = MarginalSpec::gamma(2.0, 3.0);
    REQUIRE(g3.quantile(0.7) == Catch::Approx(g1.quantile(0.7) / 3.0).epsilon(1e-11));
}

TEST_CASE("poisson quantile at the table values") {
    const auto p = MarginalSpec::poisson(2.0);
    // P(Y<=1) = 3e^{-2} ~ 0.406 < 0.5 <= P(Y<=2) ~ 0.677
    REQUIRE(p.count_quantile(0.5) == 2);
    REQUIRE(p.count_quantile(0.40) == 1);
    REQUIRE(p.count_quantile(0.69) == 3);
    REQUIRE(p.count_quantile(1e-9) == 0);
}

TEST_CASE("binomial quantile is a monotone step onto {0..N}") {
    const auto b = MarginalSpec::binomial(10, 0.4);
    std::int64_t prev = 0;
    for (double u = 0.001; u < 1.0; u += 0.001) {
        const std::int64_t k = b.count_quantile(u);
        REQUIRE(k >= prev);
        REQUIRE(k >= 0);
        REQUIRE(k <= 10);
        prev = k;
    }
    REQUIRE(b.count_quantile(1.0 - 1e-12) == 10);
}

TEST_CASE("negative binomial pmf sums to one and matches the recurrence") {
    const auto nb = MarginalSpec::neg_binomial(2.0, 0.4);
    double total = 0.0;
    nb.for_each_pmf(1e-12, [&](std::int64_t, double p) { total += p; });
    REQUIRE(total == Catch::Approx(1.0).margin(1e-11));
    // NB(2, p): P(0) = p^2, P(1) = 2 p^2 (1-p)
    REQUIRE(nb.pmf(0) == Catch::Approx(0.16).epsilon(1e-12));
    REQUIRE(nb.pmf(1) == Catch::Approx(2.0 * 0.16 * 0.6).epsilon(1e-12));
}

TEST_CASE("quantile transform reproduces the distribution (moment check)") {
    Rng rng(17);
    const auto nb = MarginalSpec::neg_binomial(2.0, 0.4);
    double mean = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) mean += static_cast<double>(nb.count_quantile(rng.uniform01()));
    mean /= n;
    REQUIRE(mean == Catch::Approx(2.0 * 0.6 / 0.4).margin(0.05));

    const auto g = MarginalSpec::gamma(5.0, 1.0);
    double gmean = 0.0;
    for (int i = 0; i < 20000; ++i) gmean += g.quantile(rng.uniform01());
    gmean /= 20000;
    REQUIRE(gmean == Catch::Approx(5.0).margin(0.1));
}

TEST_CASE("marginal parsing accepts the table notation") {
    REQUIRE(MarginalSpec::parse("E(1.5)").family() == MarginalSpec::Family::Exponential);
    REQUIRE(MarginalSpec::parse("gamma(5,1)").family() == MarginalSpec::Family::Gamma);
    REQUIRE(MarginalSpec::parse("P(2)").family() == MarginalSpec::Family::Poisson);
    REQUIRE(MarginalSpec::parse("NB(2,0.4)").family() == MarginalSpec::Family::NegBinomial);
    REQUIRE(MarginalSpec::parse("B(10,0.4)").family() == MarginalSpec::Family::Binomial);
    REQUIRE(MarginalSpec::parse("NB(2,0.4)").is_count());
    REQUIRE_FALSE(MarginalSpec::parse("E(1.5)").is_count());
    REQUIRE_THROWS_AS(MarginalSpec::parse("W(1)"), ConfigError);
    REQUIRE_THROWS_AS(MarginalSpec::parse("E()"), ConfigError);
    REQUIRE_THROWS_AS(MarginalSpec::parse("B(10.5,0.4)"), InvariantError);
}
