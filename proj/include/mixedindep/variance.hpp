#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/math/summation.hpp"
#include "mixedindep/quadrature.hpp"
#include "mixedindep/sample.hpp"

namespace mixedindep {

// Analytic marginal with closed-form Laplace transform / PGF, used by the
// covariance kernels and the variance oracle.
struct AnalyticMarginal {
    enum class Family { Exponential, Poisson };
    Family family = Family::Exponential;
    double param = 1.0;

    static AnalyticMarginal exponential(double rate) { return {Family::Exponential, rate}; }
    static AnalyticMarginal poisson(double mean) { return {Family::Poisson, mean}; }

    // Laplace transform L(s) = E exp(-sX); Exponential only.
    double laplace(double s) const {
        if (family != Family::Exponential) {
            throw InvariantError("laplace: marginal has no continuous Laplace transform here");
        }
        return param / (param + s);
    }

    // PGF G(t) = E t^Y; Poisson only.
    double pgf(double t) const {
        if (family != Family::Poisson) {
            throw InvariantError("pgf: marginal is not a count family");
        }
        return std::exp(param * (t - 1.0));
    }
};

struct VarianceEstimate {
    double sigma_sq = 0.0;
    Mode mode = Mode::two_vector;
    WeightParams wp;
};

namespace var_detail {

// sigma^2 for total independence expressed through first/second moments of
// the per-coordinate transforms U_j = 1/(X_j+a_j), V_k = 1/(Y_k+b_k+1).
inline double sigma_sq_total_from_moments(const std::vector<double>& m1x,
                                          const std::vector<double>& m2x,
                                          const std::vector<double>& m1y,
                                          const std::vector<double>& m2y) {
    const std::size_t r1 = m1x.size();
    const std::size_t r2 = m1y.size();
    double p2x = 1.0, p2y = 1.0, p1x = 1.0, p1y = 1.0;
    for (std::size_t j = 0; j < r1; ++j) {
        p2x *= m2x[j];
        p1x *= m1x[j] * m1x[j];
    }
    for (std::size_t k = 0; k < r2; ++k) {
        p2y *= m2y[k];
        p1y *= m1y[k] * m1y[k];
    }
    double out = p2x * p2y + static_cast<double>(r1 + r2 - 1) * p1x * p1y;
    for (std::size_t d = 0; d < r1; ++d) {
        double prod = m2x[d];
        for (std::size_t j = 0; j < r1; ++j) {
            if (j != d) prod *= m1x[j] * m1x[j];
        }
        out -= prod * p1y;
    }
    for (std::size_t d = 0; d < r2; ++d) {
        double prod = m2y[d];
        for (std::size_t k = 0; k < r2; ++k) {
            if (k != d) prod *= m1y[k] * m1y[k];
        }
        out -= prod * p1x;
    }
    return out;
}

} // namespace var_detail

// Ratio-consistent estimator of sigma^2_{a,b}.
//   two_vector: product of the bias-corrected sample variances of the row-wise
//               transform products (the 1/(n-1)^2 normalization).
//   total:      plug-in of per-column sample moments, with the second moments
//               bias-corrected the same way so the r1=r2=1 case reduces to the
//               two_vector value.
inline double sigma_hat(const MixedSample& sample, const WeightParams& wp, Mode mode) {
    detail::check_weights(sample, wp);
    const std::size_t n = sample.n();
    if (n < 2) throw DimensionError("sigma_hat: need n >= 2");
    const double dn = static_cast<double>(n);

    // Deviations are taken around the first value so a constant transformed
    // column yields an exact zero.
    auto column_var = [&](auto&& value) {
        const double shift = value(0);
        const double mean = math::pairwise_sum(n, [&](std::size_t i) {
                                return value(i) - shift;
                            }) / dn;
        const double ss = math::pairwise_sum(n, [&](std::size_t i) {
            const double d = (value(i) - shift) - mean;
            return d * d;
        });
        return ss / (dn - 1.0);
    };

    if (mode == Mode::two_vector) {
        std::vector<double> rx(n), ry(n);
        for (std::size_t i = 0; i < n; ++i) {
            double px = 1.0;
            for (std::size_t j = 0; j < sample.r1(); ++j) px *= 1.0 / (sample.x(i, j) + wp.a[j]);
            double py = 1.0;
            for (std::size_t k = 0; k < sample.r2(); ++k) {
                py *= 1.0 / (static_cast<double>(sample.y(i, k)) + wp.b[k] + 1.0);
            }
            rx[i] = px;
            ry[i] = py;
        }
        return column_var([&](std::size_t i) { return rx[i]; }) *
               column_var([&](std::size_t i) { return ry[i]; });
    }

    std::vector<double> m1x(sample.r1()), m2x(sample.r1());
    std::vector<double> m1y(sample.r2()), m2y(sample.r2());
    for (std::size_t j = 0; j < sample.r1(); ++j) {
        auto v = [&](std::size_t i) { return 1.0 / (sample.x(i, j) + wp.a[j]); };
        m1x[j] = math::pairwise_sum(n, v) / dn;
        m2x[j] = m1x[j] * m1x[j] + column_var(v);
    }
    for (std::size_t k = 0; k < sample.r2(); ++k) {
        auto v = [&](std::size_t i) {
            return 1.0 / (static_cast<double>(sample.y(i, k)) + wp.b[k] + 1.0);
        };
        m1y[k] = math::pairwise_sum(n, v) / dn;
        m2y[k] = m1y[k] * m1y[k] + column_var(v);
    }
    const double s2 = var_detail::sigma_sq_total_from_moments(m1x, m2x, m1y, m2y);
    return s2 > 0.0 ? s2 : 0.0;
}

// Covariance kernel of the limiting Gaussian process, with iid components per
// block under the analytic marginals.
//   two_vector: (prod G(t1t2) - prod G(t1) prod G(t2)) *
//               (prod L(s1+s2) - prod L(s1) prod L(s2))
//   total:      the four-term kernel with per-coordinate factors.
inline double cov_kernel(const AnalyticMarginal& mx, const AnalyticMarginal& my,
                         const TransformPoint& p1, const TransformPoint& p2, Mode mode) {
    if (p1.s.size() != p2.s.size() || p1.t.size() != p2.t.size()) {
        throw DimensionError("cov_kernel: point dimensions disagree");
    }
    const std::size_t r1 = p1.s.size();
    const std::size_t r2 = p1.t.size();

    if (mode == Mode::two_vector) {
        double lsum = 1.0, l1 = 1.0, l2 = 1.0;
        for (std::size_t j = 0; j < r1; ++j) {
            lsum *= mx.laplace(p1.s[j] + p2.s[j]);
            l1 *= mx.laplace(p1.s[j]);
            l2 *= mx.laplace(p2.s[j]);
        }
        double gprod = 1.0, g1 = 1.0, g2 = 1.0;
        for (std::size_t k = 0; k < r2; ++k) {
            gprod *= my.pgf(p1.t[k] * p2.t[k]);
            g1 *= my.pgf(p1.t[k]);
            g2 *= my.pgf(p2.t[k]);
        }
        return (gprod - g1 * g2) * (lsum - l1 * l2);
    }

    std::vector<double> lj(r1), l1j(r1), l2j(r1);
    for (std::size_t j = 0; j < r1; ++j) {
        lj[j] = mx.laplace(p1.s[j] + p2.s[j]);
        l1j[j] = mx.laplace(p1.s[j]);
        l2j[j] = mx.laplace(p2.s[j]);
    }
    std::vector<double> gk(r2), g1k(r2), g2k(r2);
    for (std::size_t k = 0; k < r2; ++k) {
        gk[k] = my.pgf(p1.t[k] * p2.t[k]);
        g1k[k] = my.pgf(p1.t[k]);
        g2k[k] = my.pgf(p2.t[k]);
    }
    double term1 = 1.0, lprod = 1.0, gprod = 1.0;
    for (std::size_t j = 0; j < r1; ++j) {
        term1 *= lj[j];
        lprod *= l1j[j] * l2j[j];
    }
    double gterm = 1.0;
    for (std::size_t k = 0; k < r2; ++k) {
        gterm *= gk[k];
        gprod *= g1k[k] * g2k[k];
    }
    term1 *= gterm;
    double out = term1 + static_cast<double>(r1 + r2 - 1) * lprod * gprod;
    for (std::size_t d = 0; d < r1; ++d) {
        double prod = lj[d];
        for (std::size_t j = 0; j < r1; ++j) {
            if (j != d) prod *= l1j[j] * l2j[j];
        }
        out -= prod * gprod;
    }
    for (std::size_t d = 0; d < r2; ++d) {
        double prod = gk[d];
        for (std::size_t k = 0; k < r2; ++k) {
            if (k != d) prod *= g1k[k] * g2k[k];
        }
        out -= prod * lprod;
    }
    return out;
}

// Quadruple weighted integral of the covariance kernel; the independent
// oracle for the closed-form sigma^2 expressions.
inline double sigma_sq_by_quadrature(const AnalyticMarginal& mx, const AnalyticMarginal& my,
                                     const WeightParams& wp, Mode mode,
                                     const QuadratureRule& rule) {
    const std::size_t r1 = wp.a.size();
    const std::size_t r2 = wp.b.size();
    if (rule.s_axes.size() != r1 || rule.t_axes.size() != r2) {
        throw DimensionError("sigma_sq_by_quadrature: rule does not match the weights");
    }
    // Doubled tensor grid: (s1, t1, s2, t2).
    std::vector<AxisRule> axes;
    for (int rep = 0; rep < 2; ++rep) {
        for (const auto& ax : rule.s_axes) axes.push_back(ax);
        for (const auto& ax : rule.t_axes) axes.push_back(ax);
    }
    TransformPoint p1, p2;
    p1.s.resize(r1);
    p1.t.resize(r2);
    p2.s.resize(r1);
    p2.t.resize(r2);
    double acc = 0.0;
    for_each_node(axes, [&](const std::vector<double>& c, double w) {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < r1; ++j) p1.s[j] = c[pos++];
        for (std::size_t k = 0; k < r2; ++k) p1.t[k] = c[pos++];
        for (std::size_t j = 0; j < r1; ++j) p2.s[j] = c[pos++];
        for (std::size_t k = 0; k < r2; ++k) p2.t[k] = c[pos++];
        acc += cov_kernel(mx, my, p1, p2, mode) * eval_weight(wp, p1) * eval_weight(wp, p2) * w;
    });
    return acc;
}

inline double sigma_sq_by_quadrature(const AnalyticMarginal& mx, const AnalyticMarginal& my,
                                     const WeightParams& wp, Mode mode, std::size_t m = 48) {
    return sigma_sq_by_quadrature(mx, my, wp, mode, QuadratureRule::for_weight(wp, m));
}

// E[(V + shift)^{-power}] for the analytic marginals: quadrature on the
// exponential density, series with tail mass < 1e-12 for Poisson.
inline double analytic_recip_moment(const AnalyticMarginal& marg, double shift, int power,
                                    std::size_t m = 128) {
    if (marg.family == AnalyticMarginal::Family::Exponential) {
        const double lambda = marg.param;
        const AxisRule ax = AxisRule::make(AxisRule::Map::log_decay, 3.0 / lambda, m);
        double acc = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double x = ax.nodes[i];
            acc += ax.weights[i] * lambda * std::exp(-lambda * x) /
                   std::pow(x + shift, power);
        }
        return acc;
    }
    const double lambda = marg.param;
    double pmf = std::exp(-lambda);
    double cum = 0.0, acc = 0.0;
    for (std::int64_t k = 0; cum < 1.0 - 1e-12 && k < 100000; ++k) {
        if (k > 0) pmf *= lambda / static_cast<double>(k);
        acc += pmf / std::pow(static_cast<double>(k) + shift, power);
        cum += pmf;
    }
    return acc;
}

// Population sigma^2 from analytic moments (iid components per block).
inline double sigma_sq_true(const AnalyticMarginal& mx, const AnalyticMarginal& my,
                            const WeightParams& wp, Mode mode) {
    const std::size_t r1 = wp.a.size();
    const std::size_t r2 = wp.b.size();
    std::vector<double> m1x(r1), m2x(r1), m1y(r2), m2y(r2);
    for (std::size_t j = 0; j < r1; ++j) {
        m1x[j] = analytic_recip_moment(mx, wp.a[j], 1);
        m2x[j] = analytic_recip_moment(mx, wp.a[j], 2);
    }
    for (std::size_t k = 0; k < r2; ++k) {
        m1y[k] = analytic_recip_moment(my, wp.b[k] + 1.0, 1);
        m2y[k] = analytic_recip_moment(my, wp.b[k] + 1.0, 2);
    }
    if (mode == Mode::two_vector) {
        // Var(prod U_j) * Var(prod V_k) with independent components.
        double e2x = 1.0, e1x = 1.0, e2y = 1.0, e1y = 1.0;
        for (std::size_t j = 0; j < r1; ++j) {
            e2x *= m2x[j];
            e1x *= m1x[j];
        }
        for (std::size_t k = 0; k < r2; ++k) {
            e2y *= m2y[k];
            e1y *= m1y[k];
        }
        return (e2x - e1x * e1x) * (e2y - e1y * e1y);
    }
    return var_detail::sigma_sq_total_from_moments(m1x, m2x, m1y, m2y);
}

} // namespace mixedindep
