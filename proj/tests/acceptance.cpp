// Acceptance suite: end-to-end checks against the published reference values.
// One [PASS]/[FAIL] line per criterion; exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixedindep/config.hpp"
#include "mixedindep/csv.hpp"
#include "mixedindep/inference.hpp"
#include "mixedindep/report.hpp"
#include "support/test_helpers.hpp"

using namespace mixedindep;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  --  %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::setprecision(prec) << std::fixed << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence on random small samples.
// ---------------------------------------------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20250810);
    bool pass = true;
    std::string detail;
    double worst = 0.0;
    for (int rep = 0; rep < 100 && pass; ++rep) {
        const std::size_t r1 = 1 + static_cast<std::size_t>(rng.uniform01() * 2.0) % 2;
        const std::size_t r2 = 1 + static_cast<std::size_t>(rng.uniform01() * 2.0) % 2;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0) % 4;
        const auto sample = mi_test::random_sample(rng, n, r1, r2);
        const auto wp = mi_test::random_weights(rng, r1, r2);
        double wmass = 1.0;
        for (double a : wp.a) wmass /= a;
        for (double b : wp.b) wmass /= (b + 1.0);
        const std::size_t m = (r1 + r2 >= 4) ? 32 : ((r1 + r2 == 3) ? 48 : 64);
        const Mode mode = (rep % 2 == 0) ? Mode::two_vector : Mode::total;
        try {
            const double io = oracle_statistic(sample, wp, OracleKind::I, mode, m);
            const double ic = i_statistic(sample, wp, mode);
            const double ierr = std::abs(ic - io) / std::max(std::abs(io), 1e-6 * wmass);
            const double to = oracle_statistic(sample, wp, OracleKind::T, mode, m);
            const double tc = t_statistic(sample, wp, mode);
            const double terr = std::abs(tc - to) / std::max(std::abs(to), 1e-6 * wmass);
            worst = std::max({worst, ierr, terr});
            if (ierr > 1e-6 || terr > 1e-6) {
                pass = false;
                detail = "sample " + std::to_string(rep) + " exceeded 1e-6 relative";
            }
        } catch (const std::exception& e) {
            pass = false;
            detail = std::string("oracle failure: ") + e.what();
        }
    }
    const double secs = elapsed_s(t0);
    if (pass && secs > 60.0) {
        pass = false;
        detail = "runtime " + fmt(secs, 1) + "s exceeds 60s";
    }
    if (detail.empty()) {
        std::ostringstream os;
        os << "100 samples, worst rel err " << std::scientific << std::setprecision(2) << worst
           << ", " << fmt(secs, 1) << "s";
        detail = os.str();
    }
    report(1, "closed forms match the quadrature oracle (<=1e-6 rel)", pass, detail);
}

// ---------------------------------------------------------------------------
// 2. Factorized total cross term equals the naive multi-index sum.
// ---------------------------------------------------------------------------
void criterion_2() {
    Rng rng(77);
    bool pass = true;
    double worst = 0.0;
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{
        {1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}};
    for (const auto& [r1, r2] : shapes) {
        for (std::size_t n = 1; n <= 5; ++n) {
            for (int draw = 0; draw < 3; ++draw) {
                const auto s = mi_test::random_sample(rng, n, r1, r2);
                const auto w = mi_test::random_weights(rng, r1, r2);
                // T assembled with the naive cross term:
                const double dn = static_cast<double>(n);
                double term1 = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t l = 0; l < n; ++l) {
                        double prod = 1.0;
                        for (std::size_t j = 0; j < r1; ++j) {
                            prod *= 1.0 / (s.x(i, j) + s.x(l, j) + w.a[j]);
                        }
                        for (std::size_t k = 0; k < r2; ++k) {
                            prod *= 1.0 /
                                    (static_cast<double>(s.y(i, k) + s.y(l, k)) + w.b[k] + 1.0);
                        }
                        term1 += prod;
                    }
                }
                term1 /= dn * dn;
                double term2 = 1.0;
                for (std::size_t j = 0; j < r1; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t l = 0; l < n; ++l) {
                            acc += 1.0 / (s.x(i, j) + s.x(l, j) + w.a[j]);
                        }
                    }
                    term2 *= acc / (dn * dn);
                }
                for (std::size_t k = 0; k < r2; ++k) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t l = 0; l < n; ++l) {
                            acc += 1.0 /
                                   (static_cast<double>(s.y(i, k) + s.y(l, k)) + w.b[k] + 1.0);
                        }
                    }
                    term2 *= acc / (dn * dn);
                }
                const double naive = term1 + term2 - mi_test::naive_total_cross_term(s, w);
                const double fact = t_statistic(s, w, Mode::total);
                worst = std::max(worst, std::abs(naive - fact));
                if (std::abs(naive - fact) > 1e-12) pass = false;
            }
        }
    }
    std::ostringstream os;
    os << "all shapes r1+r2<=4, n<=5; worst abs diff " << std::scientific
       << std::setprecision(2) << worst;
    report(2, "factorized total cross term equals the naive multi-sum (1e-12)", pass, os.str());
}

// ---------------------------------------------------------------------------
// 3. Hand values on the n=2 reference sample.
// ---------------------------------------------------------------------------
void criterion_3() {
    const MixedSample s({1.0, 2.0}, {0, 1}, 1, 1);
    const auto wp = WeightParams::scalar(1.0, 1.0);
    const double i_val = i_statistic(s, wp, Mode::two_vector);
    const double t_val = t_statistic(s, wp, Mode::two_vector);
    const double t_ref = 23.0 / 240.0 + 527.0 / 5760.0 - 539.0 / 2880.0;
    const double s2 = sigma_hat(s, wp, Mode::two_vector);
    const double sti = standardized_i(s, wp, Mode::two_vector);
    const double t_orc = oracle_statistic(s, wp, OracleKind::T, Mode::two_vector);

    const bool pass = std::abs(i_val - 1.0 / 144.0) <= 1e-12 &&
                      std::abs(t_val - t_ref) <= 1e-12 &&
                      std::abs(s2 - 1.0 / 5184.0) <= 1e-12 &&
                      std::abs(sti - std::sqrt(2.0) / 2.0) <= 1e-12 &&
                      std::abs(t_val - t_orc) <= 1e-8 * std::abs(t_orc);
    std::ostringstream os;
    os << "I=" << fmt(i_val, 8) << " T=" << std::scientific << std::setprecision(4) << t_val
       << " sigma^2=" << s2 << " st.I=" << std::fixed << std::setprecision(6) << sti;
    report(3, "reference-sample hand values (I, T, sigma^2, st.I)", pass, os.str());
}

// ---------------------------------------------------------------------------
// 4. Table-1 null quantiles.
// ---------------------------------------------------------------------------
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    struct Cell {
        double a, b;
        const char* design;
        std::size_t n;
        double printed;
    };
    // 0.95-quantiles as printed for E(1.5)xP(2) and E(1.5)xNB(2,0.4).
    const std::vector<Cell> cells{
        {2.0, 1.0, "EP", 50, 1.92},   {2.0, 1.0, "EP", 500, 1.95},
        {2.0, 1.0, "EP", 2000, 1.96}, {2.0, 1.0, "ENB", 50, 1.93},
        {2.0, 1.0, "ENB", 500, 1.95}, {2.0, 1.0, "ENB", 2000, 1.96},
        {0.5, 2.0, "EP", 50, 1.93},   {0.5, 2.0, "EP", 500, 1.95},
        {0.5, 2.0, "EP", 2000, 1.96}, {0.5, 2.0, "ENB", 50, 1.94},
        {0.5, 2.0, "ENB", 500, 1.96}, {0.5, 2.0, "ENB", 2000, 1.97},
    };
    bool pass = true;
    std::string detail;
    double worst = 0.0;
    std::uint64_t seed = 555000;
    for (const auto& cell : cells) {
        std::vector<MarginalSpec> margs{MarginalSpec::exponential(1.5),
                                        std::string(cell.design) == "EP"
                                            ? MarginalSpec::poisson(2.0)
                                            : MarginalSpec::neg_binomial(2.0, 0.4)};
        const auto q = mc_null_quantiles(margs, WeightParams::scalar(cell.a, cell.b), cell.n,
                                         10000, {0.95}, seed++);
        const double diff = std::abs(q[0] - cell.printed);
        worst = std::max(worst, diff);
        if (diff > 0.05) {
            pass = false;
            detail = std::string(cell.design) + " n=" + std::to_string(cell.n) + " (a,b)=(" +
                     fmt(cell.a, 1) + "," + fmt(cell.b, 1) + "): got " + fmt(q[0], 3) +
                     " want " + fmt(cell.printed, 2) + "+-0.05";
        }
    }
    if (detail.empty()) {
        detail = "12 cells within +-0.05 (worst diff " + fmt(worst, 3) + "), " +
                 fmt(elapsed_s(t0), 1) + "s";
    }
    report(4, "Table-1 null quantiles reproduced (N=10000)", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. Warp-speed size under every independence design of Tables 2 and 5.
// ---------------------------------------------------------------------------
void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    double worst = 0.0;

    auto run_design = [&](const std::vector<MarginalSpec>& margs, Mode mode,
                          const std::string& label, std::uint64_t seed) {
        SimulationConfig config;
        config.marginals = margs;
        config.vine = VineSpec::independence(margs.size());
        config.n = 50;
        config.replicates = 5000;
        config.seed = seed;
        config.alpha = 0.05;
        config.design_label = label;
        std::size_t r1 = 0;
        while (r1 < margs.size() && !margs[r1].is_count()) ++r1;
        const std::size_t r2 = margs.size() - r1;
        for (auto family : {StatFamily::T, StatFamily::I, StatFamily::StI}) {
            StatisticSpec spec;
            spec.family = family;
            spec.mode = mode;
            spec.wp = default_weights(mode, r1, r2);
            config.statistics.push_back(spec);
        }
        StatisticSpec d;
        d.family = StatFamily::D;
        d.mode = mode;
        d.d_nodes = margs.size() >= 3 ? 12 : 16;
        config.statistics.push_back(d);

        const auto result = warp_speed_power(config);
        for (const auto& cell : result.cells) {
            const double dev = std::abs(cell.rejection_rate_pct - 5.0);
            worst = std::max(worst, dev);
            if (dev > 1.5) {
                pass = false;
                if (detail.empty()) {
                    detail = label + " " + cell.spec.label() + ": " +
                             fmt(cell.rejection_rate_pct, 2) + "% (want 5 +- 1.5)";
                }
            }
        }
    };

    // Table 2 independence designs (bivariate, two_vector).
    run_design({MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)}, Mode::two_vector,
               "E(1.5)xP(2)", 7001);
    run_design({MarginalSpec::exponential(1.5), MarginalSpec::neg_binomial(2.0, 0.4)},
               Mode::two_vector, "E(1.5)xNB(2,0.4)", 7002);
    run_design({MarginalSpec::gamma(5.0, 1.0), MarginalSpec::binomial(10, 0.4)},
               Mode::two_vector, "gamma(5,1)xB(10,0.4)", 7003);
    // Table 5 independence designs (one continuous, two counts, total mode).
    run_design({MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0),
                MarginalSpec::poisson(2.0)},
               Mode::total, "E(1.5)xP(2)xP(2)", 7004);
    run_design({MarginalSpec::exponential(1.5), MarginalSpec::neg_binomial(2.0, 0.4),
                MarginalSpec::neg_binomial(2.0, 0.4)},
               Mode::total, "E(1.5)xNB(2,0.4)^2", 7005);
    run_design({MarginalSpec::gamma(5.0, 1.0), MarginalSpec::binomial(10, 0.4),
                MarginalSpec::binomial(10, 0.4)},
               Mode::total, "gamma(5,1)xB(10,0.4)^2", 7006);

    if (detail.empty()) {
        detail = "24 size cells within 5% +- 1.5% (worst dev " + fmt(worst, 2) + "), " +
                 fmt(elapsed_s(t0), 1) + "s";
    }
    report(5, "null calibration of the warp-speed engine (N=5000)", pass, detail);
}

// ---------------------------------------------------------------------------
// 6. Power spot checks at desk scale.
// ---------------------------------------------------------------------------
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    std::ostringstream got;

    auto run_cell = [&](SimulationConfig config, double printed, double tol,
                        const std::string& label) {
        const auto result = warp_speed_power(config);
        const double rate = result.cells[0].rejection_rate_pct;
        got << label << "=" << fmt(rate, 1) << "/" << fmt(printed, 0) << " ";
        if (std::abs(rate - printed) > tol) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += label + ": got " + fmt(rate, 1) + ", want " + fmt(printed, 0) + "+-" +
                      fmt(tol, 0);
        }
    };

    {
        // Table 2, n=50, st.I (1,5), Ga(0.55) -> 98
        SimulationConfig c;
        c.marginals = {MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)};
        c.vine = VineSpec::single_pair(CopulaModel::gaussian(0.55));
        c.n = 50;
        c.replicates = 2000;
        c.seed = 8001;
        StatisticSpec spec;
        spec.family = StatFamily::StI;
        spec.wp = WeightParams::scalar(1.0, 5.0);
        c.statistics = {spec};
        run_cell(c, 98.0, 3.0, "T2:st.I/Ga");
    }
    {
        // Table 2, n=20, T (0.2,0.5), Cl(0.5) -> 33
        SimulationConfig c;
        c.marginals = {MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)};
        c.vine = VineSpec::single_pair(CopulaModel::clayton(0.5));
        c.n = 20;
        c.replicates = 2000;
        c.seed = 8002;
        StatisticSpec spec;
        spec.family = StatFamily::T;
        spec.wp = WeightParams::scalar(0.2, 0.5);
        c.statistics = {spec};
        run_cell(c, 33.0, 3.0, "T2:T/Cl");
    }
    {
        // Table 2, n=50, D, Gu(1.5), E(1.5)xP(2) -> 88 (+-5, integration-domain caveat)
        SimulationConfig c;
        c.marginals = {MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)};
        c.vine = VineSpec::single_pair(CopulaModel::gumbel(1.5));
        c.n = 50;
        c.replicates = 2000;
        c.seed = 8003;
        StatisticSpec spec;
        spec.family = StatFamily::D;
        spec.d_nodes = 16;
        c.statistics = {spec};
        run_cell(c, 88.0, 5.0, "T2:D/Gu");
    }
    {
        // Table 3 (two vectors, 1 cont + 2 counts), n=50, st.I (1,5),
        // Ga(theta1=0.75, theta2=0.55) -> 100 (+-6, vine structures are figure-only)
        SimulationConfig c;
        c.marginals = {MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0),
                       MarginalSpec::poisson(2.0)};
        DVineDesign design;
        design.family = CopulaModel::Family::Gaussian;
        design.theta1 = 0.75;
        design.theta2 = 0.55;
        c.vine = design.build(1, 2);
        c.n = 50;
        c.replicates = 2000;
        c.seed = 8004;
        StatisticSpec spec;
        spec.family = StatFamily::StI;
        spec.mode = Mode::two_vector;
        spec.wp = WeightParams::scalar(1.0, 5.0, 1, 2);
        c.statistics = {spec};
        run_cell(c, 100.0, 6.0, "T3:st.I/Ga");
    }
    {
        // Table 5 (total independence, 1 cont + 2 counts), n=50, st.I (0.2,5),
        // E(1.5)xNB(2,0.4)^2, theta1=0, Ga theta2=0.55 -> 99 (+-6)
        SimulationConfig c;
        c.marginals = {MarginalSpec::exponential(1.5), MarginalSpec::neg_binomial(2.0, 0.4),
                       MarginalSpec::neg_binomial(2.0, 0.4)};
        DVineDesign design;
        design.family = CopulaModel::Family::Gaussian;
        design.theta1 = 0.0;
        design.theta2 = 0.55;
        c.vine = design.build(1, 2);
        c.n = 50;
        c.replicates = 2000;
        c.seed = 8005;
        StatisticSpec spec;
        spec.family = StatFamily::StI;
        spec.mode = Mode::total;
        spec.wp = WeightParams::scalar(0.2, 5.0, 1, 2);
        c.statistics = {spec};
        run_cell(c, 99.0, 6.0, "T5:st.I/Ga");
    }

    if (detail.empty()) {
        detail = got.str() + fmt(elapsed_s(t0), 1) + "s";
    } else {
        detail = got.str() + "-- " + detail;
    }
    report(6, "power spot checks (N=2000, +-3 / +-5 D / +-6 multivariate)", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. Asymptotic normality of the null st.I at n=2000.
// ---------------------------------------------------------------------------
void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<MarginalSpec> margs{MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)};
    const std::size_t N = 10000;
    std::vector<double> stats(N);
    parallel_for(N, [&](std::size_t rep) {
        Rng rng = derive_stream(424242, rep);
        std::vector<double> x(2000);
        std::vector<std::int64_t> y(2000);
        for (std::size_t i = 0; i < 2000; ++i) {
            x[i] = margs[0].quantile(rng.uniform01());
            y[i] = margs[1].count_quantile(rng.uniform01());
        }
        const MixedSample sample(std::move(x), std::move(y), 1, 1);
        stats[rep] = standardized_i(sample, WeightParams::scalar(2.0, 1.0), Mode::two_vector);
    });
    std::sort(stats.begin(), stats.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double f = math::norm_cdf(stats[i]);
        ks = std::max({ks, std::abs(f - static_cast<double>(i) / N),
                       std::abs(f - static_cast<double>(i + 1) / N)});
    }
    const bool pass = ks < 0.02;
    report(7, "null st.I is standard normal at n=2000 (KS < 0.02)", pass,
           "KS distance " + fmt(ks, 4) + ", " + fmt(elapsed_s(t0), 1) + "s");
}

// ---------------------------------------------------------------------------
// 8. Ratio consistency of sigma_hat.
// ---------------------------------------------------------------------------
void criterion_8() {
    const auto mx = AnalyticMarginal::exponential(1.5);
    const auto my = AnalyticMarginal::poisson(2.0);
    const auto wp = WeightParams::scalar(2.0, 1.0);
    const double sigma_true = std::sqrt(sigma_sq_true(mx, my, wp, Mode::two_vector));

    std::vector<MarginalSpec> margs{MarginalSpec::exponential(1.5), MarginalSpec::poisson(2.0)};
    std::vector<double> ratio(200);
    parallel_for(ratio.size(), [&](std::size_t rep) {
        Rng rng = derive_stream(99123, rep);
        std::vector<double> x(2000);
        std::vector<std::int64_t> y(2000);
        for (std::size_t i = 0; i < 2000; ++i) {
            x[i] = margs[0].quantile(rng.uniform01());
            y[i] = margs[1].count_quantile(rng.uniform01());
        }
        const MixedSample sample(std::move(x), std::move(y), 1, 1);
        ratio[rep] = std::sqrt(sigma_hat(sample, wp, Mode::two_vector)) / sigma_true;
    });
    std::sort(ratio.begin(), ratio.end());
    const double median = 0.5 * (ratio[99] + ratio[100]);
    const bool pass = median >= 0.95 && median <= 1.05;
    report(8, "sigma_hat ratio consistency at n=2000", pass,
           "median ratio " + fmt(median, 4) + " (sigma_true " + fmt(sigma_true, 6) + ")");
}

// ---------------------------------------------------------------------------
// 9. Real-data fixture: bike sharing sample of 200 days.
// ---------------------------------------------------------------------------
void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string path = std::string(MIXEDINDEP_SOURCE_DIR) + "/data/bike_sharing_200.csv";
    const auto table = CsvTable::read_file(path);
    const auto sample = build_sample(table, {"temp", "windspeed"}, {"count"});

    bool pass = sample.n() == 200;
    std::ostringstream os;
    const auto wp = default_weights(Mode::two_vector, 2, 1);
    std::uint64_t seed = 2024;
    for (auto family : {StatFamily::I, StatFamily::T, StatFamily::StI}) {
        StatisticSpec spec;
        spec.family = family;
        spec.mode = Mode::two_vector;
        spec.wp = wp;
        const double p = permutation_pvalue(sample, spec, 999, seed++);
        os << spec.label() << " p=" << fmt(p, 3) << " ";
        if (!(p < 0.05)) pass = false;
    }
    {
        StatisticSpec spec;
        spec.family = StatFamily::D;
        spec.mode = Mode::two_vector;
        spec.d_nodes = 32;
        const double p = permutation_pvalue(sample, spec, 999, seed++);
        os << "D p=" << fmt(p, 3) << " ";
        if (std::abs(p - 0.62) > 0.10) pass = false;
    }
    const double secs = elapsed_s(t0);
    if (secs > 30.0) pass = false;
    os << fmt(secs, 1) << "s";
    report(9, "bike-sharing fixture: I/T/st.I reject, D near 0.62", pass, os.str());
}

// ---------------------------------------------------------------------------
// 10. Byte-identical JSON across worker counts (through the CLI).
// ---------------------------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_10() {
    const std::string cli = MIXEDINDEP_CLI_PATH;
    const std::string cfg_power = "/tmp/mixedindep_acc_power.toml";
    {
        std::ofstream out(cfg_power);
        out << "[marginals]\nx = [\"E(1.5)\"]\ny = [\"P(2)\"]\n"
               "[vine]\nfamily = \"gaussian\"\ntheta = 0.35\n"
               "[study]\nmode = \"two_vector\"\nn = [20, 50]\nreplicates = 400\n"
               "statistics = [\"t(1,5)\", \"sti(1,5)\", \"d(0.5)\"]\nd_grid = 12\nseed = 4242\n";
    }
    const std::string cfg_quant = "/tmp/mixedindep_acc_quant.toml";
    {
        std::ofstream out(cfg_quant);
        out << "[marginals]\nx = [\"E(1.5)\"]\ny = [\"P(2)\"]\n"
               "[vine]\nfamily = \"independence\"\n"
               "[study]\nn = [50, 100]\nreplicates = 600\na = 2\nb = 1\nseed = 777\n";
    }
    bool pass = true;
    std::string detail = "power + quantiles JSON identical for 1 vs 4 workers";
    auto run = [&](const std::string& sub, const std::string& cfg, const std::string& threads,
                   const std::string& out) {
        const std::string cmd = "MIXEDINDEP_THREADS=" + threads + " " + cli + " " + sub +
                                " --config " + cfg + " --out " + out + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            pass = false;
            detail = "CLI invocation failed: " + cmd;
        }
    };
    run("power", cfg_power, "1", "/tmp/mixedindep_acc_p1");
    run("power", cfg_power, "4", "/tmp/mixedindep_acc_p4");
    run("quantiles", cfg_quant, "1", "/tmp/mixedindep_acc_q1");
    run("quantiles", cfg_quant, "4", "/tmp/mixedindep_acc_q4");
    if (pass) {
        const auto p1 = slurp("/tmp/mixedindep_acc_p1.json");
        const auto p4 = slurp("/tmp/mixedindep_acc_p4.json");
        const auto q1 = slurp("/tmp/mixedindep_acc_q1.json");
        const auto q4 = slurp("/tmp/mixedindep_acc_q4.json");
        if (p1.empty() || p1 != p4) {
            pass = false;
            detail = "power JSON differs across MIXEDINDEP_THREADS";
        } else if (q1.empty() || q1 != q4) {
            pass = false;
            detail = "quantile JSON differs across MIXEDINDEP_THREADS";
        }
    }
    report(10, "determinism across MIXEDINDEP_THREADS (byte-identical JSON)", pass, detail);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s: %d/10 criteria passed (%.1fs total)\n", g_failures == 0 ? "OK" : "FAILURES",
                10 - g_failures, elapsed_s(t0));
    return g_failures;
}
