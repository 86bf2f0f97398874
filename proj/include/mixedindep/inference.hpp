#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mixedindep/math/special.hpp"
#include "mixedindep/parallel.hpp"
#include "mixedindep/rng.hpp"
#include "mixedindep/sample.hpp"
#include "mixedindep/sampling.hpp"
#include "mixedindep/statistics.hpp"

namespace mixedindep {

// Two-sided standard-normal p-value for the standardized statistic.
inline double asymptotic_pvalue(double st_i_value) {
    if (!std::isfinite(st_i_value)) {
        throw InvariantError("asymptotic_pvalue: statistic must be finite");
    }
    return math::norm_two_sided_tail(st_i_value);
}

// Type-7 empirical quantile (linear interpolation) on a copy of the data.
inline double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw DimensionError("empirical_quantile: empty input");
    if (!(level > 0.0 && level < 1.0)) {
        throw InvariantError("empirical_quantile: level must lie in (0,1)");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * level;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace inf_detail {

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i));
        std::swap(p[i - 1], p[std::min(j, i - 1)]);
    }
    return p;
}

} // namespace inf_detail

// Null resampling scheme.
//   two_vector: the Y-block rows are re-paired with the X rows by one joint
//               permutation.
//   total:      every non-anchor column (all but the first X column) gets an
//               independent permutation; fixing one column is WLOG.
inline MixedSample permute_sample(const MixedSample& sample, Mode mode, Rng& rng) {
    const std::size_t n = sample.n();
    if (mode == Mode::two_vector) {
        return sample.with_y_rows(inf_detail::random_permutation(n, rng));
    }
    std::vector<double> x(sample.x_data());
    std::vector<std::int64_t> y(sample.y_data());
    for (std::size_t j = 1; j < sample.r1(); ++j) {
        const auto p = inf_detail::random_permutation(n, rng);
        for (std::size_t i = 0; i < n; ++i) x[i * sample.r1() + j] = sample.x(p[i], j);
    }
    for (std::size_t k = 0; k < sample.r2(); ++k) {
        const auto p = inf_detail::random_permutation(n, rng);
        for (std::size_t i = 0; i < n; ++i) y[i * sample.r2() + k] = sample.y(p[i], k);
    }
    return MixedSample(std::move(x), std::move(y), sample.r1(), sample.r2());
}

// Permutation p-value with the add-one convention p = (1 + #{>=}) / (B + 1).
// Signed statistics (I, st.I) are compared through absolute values.
inline double permutation_pvalue(const MixedSample& sample, const StatisticSpec& spec,
                                 std::size_t B, std::uint64_t seed) {
    if (sample.n() < 2) throw DimensionError("permutation_pvalue: need n >= 2");
    if (B < 1) throw InvariantError("permutation_pvalue: need B >= 1");

    const bool use_abs = spec.signed_statistic();
    const double observed = evaluate_statistic(sample, spec);
    const double ref = use_abs ? std::abs(observed) : observed;

    std::vector<std::uint8_t> exceed(B, 0);
    if (spec.family == StatFamily::D) {
        // The evaluator caches the per-row exponential tables; each permutation
        // stream draws its own row rebinding.
        const DSigma sigma = DSigma::scalar(spec.d_sigma, sample.r1(), sample.r2());
        const auto rule = QuadratureRule::for_cf_statistic(sigma.s, sample.r2(), spec.d_nodes);
        const DStatEvaluator evaluator(sample, sigma, spec.mode, rule);
        parallel_for(B, [&](std::size_t b) {
            Rng rng = derive_stream(seed, b);
            double value;
            if (spec.mode == Mode::two_vector) {
                value = evaluator.value_two_vector(
                    inf_detail::random_permutation(sample.n(), rng));
            } else {
                std::vector<std::vector<std::size_t>> perms(sample.r1() + sample.r2());
                for (std::size_t ax = 1; ax < perms.size(); ++ax) {
                    perms[ax] = inf_detail::random_permutation(sample.n(), rng);
                }
                value = evaluator.value_total(perms);
            }
            exceed[b] = (use_abs ? std::abs(value) : value) >= ref ? 1 : 0;
        });
    } else {
        parallel_for(B, [&](std::size_t b) {
            Rng rng = derive_stream(seed, b);
            const MixedSample permuted = permute_sample(sample, spec.mode, rng);
            const double value = evaluate_statistic(permuted, spec);
            exceed[b] = (use_abs ? std::abs(value) : value) >= ref ? 1 : 0;
        });
    }
    std::size_t count = 0;
    for (auto e : exceed) count += e;
    return (1.0 + static_cast<double>(count)) / (static_cast<double>(B) + 1.0);
}

// Empirical null quantiles of sqrt(n)|I_n|/sigma_hat under independent
// marginals, N Monte-Carlo replicates.
inline std::vector<double> mc_null_quantiles(const std::vector<MarginalSpec>& marginals,
                                             const WeightParams& wp, std::size_t n,
                                             std::size_t N, const std::vector<double>& levels,
                                             std::uint64_t seed) {
    std::size_t r1 = 0;
    while (r1 < marginals.size() && !marginals[r1].is_count()) ++r1;
    const std::size_t r2 = marginals.size() - r1;
    if (r1 == 0 || r2 == 0) {
        throw DimensionError("mc_null_quantiles: need both continuous and count marginals");
    }

    std::vector<double> stats(N, 0.0);
    parallel_for(N, [&](std::size_t rep) {
        Rng rng = derive_stream(seed, rep);
        std::vector<double> x(n * r1);
        std::vector<std::int64_t> y(n * r2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < r1; ++j) x[i * r1 + j] = marginals[j].quantile(rng.uniform01());
            for (std::size_t k = 0; k < r2; ++k) {
                y[i * r2 + k] = marginals[r1 + k].count_quantile(rng.uniform01());
            }
        }
        const MixedSample sample(std::move(x), std::move(y), r1, r2);
        try {
            stats[rep] = std::abs(standardized_i(sample, wp, Mode::two_vector));
        } catch (const DegenerateVariance&) {
            stats[rep] = 0.0;
        }
    });

    std::vector<double> out;
    out.reserve(levels.size());
    for (double level : levels) out.push_back(empirical_quantile(stats, level));
    return out;
}

// ---------------------------------------------------------------------------
// Warp-speed power engine: one alternative draw and one permuted (null) draw
// per replicate; the N pooled null values form the reference distribution of
// each statistic cell.
// ---------------------------------------------------------------------------

struct SimulationConfig {
    std::vector<MarginalSpec> marginals;  // X block first
    VineSpec vine;
    std::size_t n = 50;
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::vector<StatisticSpec> statistics;
    std::string design_label;

    void validate() const {
        if (marginals.size() < 2) throw ConfigError("simulation needs at least two marginals");
        if (marginals.size() != vine.dim) {
            throw ConfigError("marginal count must match the vine dimension");
        }
        if (n < 2) throw ConfigError("sample size must be at least 2");
        if (replicates < 1) throw ConfigError("replicate count must be at least 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
        if (statistics.empty()) throw ConfigError("at least one statistic must be requested");
        vine.validate();
    }
};

struct PowerCell {
    StatisticSpec spec;
    double rejection_rate_pct = 0.0;
};

struct PowerResult {
    SimulationConfig config;
    std::vector<PowerCell> cells;
};

inline PowerResult warp_speed_power(const SimulationConfig& config) {
    config.validate();
    const std::size_t nstats = config.statistics.size();
    const std::size_t N = config.replicates;

    // alt/null statistic value per (replicate, statistic cell)
    std::vector<double> alt(N * nstats), nul(N * nstats);
    const auto plan = config.vine.sampling_order();

    std::size_t r1 = 0;
    while (r1 < config.marginals.size() && !config.marginals[r1].is_count()) ++r1;
    const std::size_t r2 = config.marginals.size() - r1;

    parallel_for(N, [&](std::size_t rep) {
        Rng rng = derive_stream(config.seed, rep);
        std::vector<double> x(config.n * r1);
        std::vector<std::int64_t> y(config.n * r2);
        for (std::size_t i = 0; i < config.n; ++i) {
            const auto u = vine_sample_row(config.vine, plan, rng);
            for (std::size_t j = 0; j < r1; ++j) x[i * r1 + j] = config.marginals[j].quantile(u[j]);
            for (std::size_t k = 0; k < r2; ++k) {
                y[i * r2 + k] = config.marginals[r1 + k].count_quantile(u[r1 + k]);
            }
        }
        const MixedSample sample(std::move(x), std::move(y), r1, r2);

        // One permuted sample per mode, shared by that mode's statistics.
        bool have_tv = false, have_tot = false;
        for (const auto& spec : config.statistics) {
            if (spec.mode == Mode::two_vector) have_tv = true;
            if (spec.mode == Mode::total) have_tot = true;
        }
        std::vector<MixedSample> permuted;
        permuted.reserve(2);
        const MixedSample* tv = nullptr;
        const MixedSample* tot = nullptr;
        if (have_tv) {
            permuted.push_back(permute_sample(sample, Mode::two_vector, rng));
            tv = &permuted.back();
        }
        if (have_tot) {
            permuted.push_back(permute_sample(sample, Mode::total, rng));
            tot = &permuted.back();
        }

        for (std::size_t s = 0; s < nstats; ++s) {
            const auto& spec = config.statistics[s];
            const MixedSample& null_sample = (spec.mode == Mode::two_vector) ? *tv : *tot;
            auto eval = [&](const MixedSample& smp) {
                if (spec.family == StatFamily::StI) {
                    try {
                        return standardized_i(smp, spec.wp, spec.mode);
                    } catch (const DegenerateVariance&) {
                        return 0.0;  // no usable evidence in this replicate
                    }
                }
                return evaluate_statistic(smp, spec);
            };
            alt[rep * nstats + s] = eval(sample);
            nul[rep * nstats + s] = eval(null_sample);
        }
    });

    PowerResult result;
    result.config = config;
    for (std::size_t s = 0; s < nstats; ++s) {
        const auto& spec = config.statistics[s];
        std::vector<double> null_values(N);
        for (std::size_t rep = 0; rep < N; ++rep) {
            const double v = nul[rep * nstats + s];
            null_values[rep] = spec.signed_statistic() ? std::abs(v) : v;
        }
        const double cutoff = empirical_quantile(null_values, 1.0 - config.alpha);
        std::size_t rejections = 0;
        for (std::size_t rep = 0; rep < N; ++rep) {
            const double v = alt[rep * nstats + s];
            const double ref = spec.signed_statistic() ? std::abs(v) : v;
            if (ref > cutoff) ++rejections;
        }
        result.cells.push_back(
            PowerCell{spec, 100.0 * static_cast<double>(rejections) / static_cast<double>(N)});
    }
    return result;
}

} // namespace mixedindep
