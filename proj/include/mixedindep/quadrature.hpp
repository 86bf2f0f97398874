#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/sample.hpp"
#include "mixedindep/transforms.hpp"

namespace mixedindep {

namespace quad_detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_m.
inline void legendre(std::size_t m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) + 1.0) * z * p1 -
                      static_cast<double>(k) * p2) / (static_cast<double>(k) + 1.0);
            }
            pp = static_cast<double>(m) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
}

// Gauss-Laguerre nodes and e^{x}-modified weights, so the weight function of
// the integral is carried by the integrand itself. The recurrence is evaluated
// in e^{-x/2}-scaled form to avoid overflow at large nodes.
inline void laguerre_modified(std::size_t m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * static_cast<double>(m));
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * static_cast<double>(m));
        } else {
            const double ai = static_cast<double>(i - 1);
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2]);
        }
        double pps = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            // L_k(z) * exp(-z/2), stable for large z.
            double p0 = std::exp(-0.5 * z), p1 = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) + 1.0 - z) * p1 -
                      static_cast<double>(k) * p2) / (static_cast<double>(k) + 1.0);
            }
            pps = static_cast<double>(m) * (p0 - p1) / z;
            const double dz = p0 / pps;
            z -= dz;
            if (std::abs(dz) < 1e-14 * std::max(1.0, z)) break;
        }
        x[i] = z;
        // Modified weight w_i * e^{x_i} from the scaled derivative value.
        w[i] = 1.0 / (z * pps * pps);
    }
}

} // namespace quad_detail

// One integration axis in physical coordinates. `spec` remembers the map so a
// refined copy reuses identical geometry with more nodes.
struct AxisRule {
    enum class Map {
        legendre01,     // plain GL on [0,1]
        log_decay,      // R+ via s = -kappa ln(v); param = kappa
        power01,        // [0,1] via t = v^p;       param = p
        interval,       // GL on [0, param]
        laguerre        // R+ Gauss-Laguerre, weight folded into the integrand
    };
    Map map = Map::legendre01;
    double param = 1.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    static AxisRule make(Map map, double param, std::size_t m) {
        AxisRule ax;
        ax.map = map;
        ax.param = param;
        if (m < 2) throw DimensionError("AxisRule: need at least 2 nodes");
        if (map == Map::laguerre) {
            quad_detail::laguerre_modified(m, ax.nodes, ax.weights);
            return ax;
        }
        std::vector<double> x, w;
        quad_detail::legendre(m, x, w);
        ax.nodes.resize(m);
        ax.weights.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double v = 0.5 * (x[i] + 1.0);
            const double wv = 0.5 * w[i];
            switch (map) {
                case Map::legendre01:
                    ax.nodes[i] = v;
                    ax.weights[i] = wv;
                    break;
                case Map::log_decay:
                    ax.nodes[i] = -param * std::log(v);
                    ax.weights[i] = param * wv / v;
                    break;
                case Map::power01:
                    ax.nodes[i] = std::pow(v, param);
                    ax.weights[i] = param * std::pow(v, param - 1.0) * wv;
                    break;
                case Map::interval:
                    ax.nodes[i] = param * v;
                    ax.weights[i] = param * wv;
                    break;
                case Map::laguerre:
                    break;
            }
        }
        return ax;
    }

    AxisRule refined(std::size_t m) const { return make(map, param, m); }
    std::size_t size() const { return nodes.size(); }
};

// Tensor-product rule over R_+^{r1} x [0,1]^{r2}.
struct QuadratureRule {
    std::vector<AxisRule> s_axes;
    std::vector<AxisRule> t_axes;
    std::size_t m = 0;

    std::size_t dim() const { return s_axes.size() + t_axes.size(); }

    QuadratureRule refined(std::size_t new_m) const {
        QuadratureRule r;
        r.m = new_m;
        for (const auto& ax : s_axes) r.s_axes.push_back(ax.refined(new_m));
        for (const auto& ax : t_axes) r.t_axes.push_back(ax.refined(new_m));
        return r;
    }

    // Rule matched to the weight w(s,t): the log map absorbs e^{-a_j s} with
    // kappa_j = 3/a_j (leading node exponent 2), the power map absorbs t^{b_k}.
    static QuadratureRule for_weight(const WeightParams& wp, std::size_t m,
                                     bool laguerre = false) {
        QuadratureRule r;
        r.m = m;
        for (double a : wp.a) {
            r.s_axes.push_back(laguerre ? AxisRule::make(AxisRule::Map::laguerre, 0.0, m)
                                        : AxisRule::make(AxisRule::Map::log_decay, 3.0 / a, m));
        }
        for (double b : wp.b) {
            r.t_axes.push_back(AxisRule::make(AxisRule::Map::power01, 3.0 / (b + 1.0), m));
        }
        return r;
    }

    // Rule matched to the statistic integrands: every term of xi (power `order`
    // of xi) decays at least like exp(-(order*minX_j + a_j)s_j) on axis j and
    // vanishes at least like t_k^{b_k} on axis k.
    static QuadratureRule for_oracle(const MixedSample& sample, const WeightParams& wp,
                                     int order, std::size_t m, bool laguerre = false) {
        detail::check_weights(sample, wp);
        QuadratureRule r;
        r.m = m;
        for (std::size_t j = 0; j < sample.r1(); ++j) {
            double xmin = sample.x(0, j);
            for (std::size_t i = 1; i < sample.n(); ++i) xmin = std::min(xmin, sample.x(i, j));
            const double decay = wp.a[j] + static_cast<double>(order) * xmin;
            r.s_axes.push_back(laguerre
                                   ? AxisRule::make(AxisRule::Map::laguerre, 0.0, m)
                                   : AxisRule::make(AxisRule::Map::log_decay, 3.0 / decay, m));
        }
        for (std::size_t k = 0; k < sample.r2(); ++k) {
            r.t_axes.push_back(AxisRule::make(AxisRule::Map::power01, 3.0 / (wp.b[k] + 1.0), m));
        }
        return r;
    }

    // Rule for the characteristic-function statistic: Gaussian weight, so the
    // s-axes are truncated where exp(-sigma^2 s^2 / 2) drops below 1e-12.
    static QuadratureRule for_cf_statistic(const std::vector<double>& sigma_s,
                                           std::size_t r2, std::size_t m) {
        QuadratureRule r;
        r.m = m;
        for (double sig : sigma_s) {
            const double upper = std::sqrt(2.0 * 27.63) / sig;
            r.s_axes.push_back(AxisRule::make(AxisRule::Map::interval, upper, m));
        }
        for (std::size_t k = 0; k < r2; ++k) {
            r.t_axes.push_back(AxisRule::make(AxisRule::Map::legendre01, 1.0, m));
        }
        return r;
    }
};

// Iterates f over the tensor grid of `axes`; f receives the coordinate vector
// and the product of axis weights. Weight prefixes are maintained per level.
template <typename F>
void for_each_node(const std::vector<AxisRule>& axes, F&& f) {
    const std::size_t d = axes.size();
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> coord(d), wpref(d + 1);
    wpref[0] = 1.0;
    for (std::size_t lvl = 0; lvl < d; ++lvl) {
        coord[lvl] = axes[lvl].nodes[0];
        wpref[lvl + 1] = wpref[lvl] * axes[lvl].weights[0];
    }
    for (;;) {
        f(coord, wpref[d]);
        std::size_t lvl = d;
        while (lvl > 0) {
            --lvl;
            if (++idx[lvl] < axes[lvl].size()) {
                coord[lvl] = axes[lvl].nodes[idx[lvl]];
                wpref[lvl + 1] = wpref[lvl] * axes[lvl].weights[idx[lvl]];
                for (std::size_t l2 = lvl + 1; l2 < d; ++l2) {
                    idx[l2] = 0;
                    coord[l2] = axes[l2].nodes[0];
                    wpref[l2 + 1] = wpref[l2] * axes[l2].weights[0];
                }
                break;
            }
            if (lvl == 0) return;
        }
    }
}

// Tensor-product approximation of the weighted integral  int f(s,t) w(s,t) ds dt.
template <typename F>
double integrate_weighted(F&& f, const WeightParams& wp, std::size_t r1, std::size_t r2,
                          const QuadratureRule& rule) {
    if (rule.s_axes.size() != r1 || rule.t_axes.size() != r2) {
        throw DimensionError("integrate_weighted: rule dimensions do not match (r1, r2)");
    }
    if (wp.a.size() != r1 || wp.b.size() != r2) {
        throw DimensionError("integrate_weighted: weight dimensions do not match (r1, r2)");
    }
    std::vector<AxisRule> axes;
    axes.reserve(r1 + r2);
    for (const auto& ax : rule.s_axes) axes.push_back(ax);
    for (const auto& ax : rule.t_axes) axes.push_back(ax);

    TransformPoint p;
    p.s.resize(r1);
    p.t.resize(r2);
    double acc = 0.0;
    for_each_node(axes, [&](const std::vector<double>& coord, double w) {
        for (std::size_t j = 0; j < r1; ++j) p.s[j] = coord[j];
        for (std::size_t k = 0; k < r2; ++k) p.t[k] = coord[r1 + k];
        acc += f(p) * eval_weight(wp, p) * w;
    });
    return acc;
}

namespace quad_detail {

// Grid evaluation of the statistic integrals. Per-axis tables of the row
// factors exp(-s_k X_ij) and t_q^{Y_ik} make each node an O(n*(r1+r2))
// multiply-add; the evaluated quantity is still xi_n at that node.
inline double statistic_integral(const MixedSample& sample, const WeightParams& wp,
                                 bool squared, Mode mode, const QuadratureRule& rule) {
    const std::size_t n = sample.n();
    const std::size_t r1 = sample.r1();
    const std::size_t r2 = sample.r2();
    if (rule.s_axes.size() != r1 || rule.t_axes.size() != r2) {
        throw DimensionError("statistic_integral: rule does not match the sample dimensions");
    }

    // tab[axis][node * n + row]
    std::vector<std::vector<double>> stab(r1), ttab(r2);
    for (std::size_t j = 0; j < r1; ++j) {
        const auto& ax = rule.s_axes[j];
        stab[j].resize(ax.size() * n);
        for (std::size_t k = 0; k < ax.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                stab[j][k * n + i] = std::exp(-ax.nodes[k] * sample.x(i, j));
            }
        }
    }
    for (std::size_t k2 = 0; k2 < r2; ++k2) {
        const auto& ax = rule.t_axes[k2];
        ttab[k2].resize(ax.size() * n);
        for (std::size_t q = 0; q < ax.size(); ++q) {
            for (std::size_t i = 0; i < n; ++i) {
                ttab[k2][q * n + i] = detail::pow_count(ax.nodes[q], sample.y(i, k2));
            }
        }
    }

    // Marginal factors. two_vector: L over the s-grid and G over the t-grid;
    // total: one averaged vector per axis.
    const double dn = static_cast<double>(n);
    std::vector<double> lgrid, ggrid;
    std::vector<std::vector<double>> lax(r1), gax(r2);
    if (mode == Mode::two_vector) {
        std::vector<AxisRule> sax(rule.s_axes.begin(), rule.s_axes.end());
        std::size_t snodes = 1;
        for (const auto& ax : sax) snodes *= ax.size();
        lgrid.assign(snodes, 0.0);
        std::vector<std::size_t> idx(r1, 0);
        for (std::size_t flat = 0; flat < snodes; ++flat) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double prod = 1.0;
                for (std::size_t j = 0; j < r1; ++j) prod *= stab[j][idx[j] * n + i];
                acc += prod;
            }
            lgrid[flat] = acc / dn;
            for (std::size_t j = r1; j-- > 0;) {
                if (++idx[j] < rule.s_axes[j].size()) break;
                idx[j] = 0;
            }
        }
        std::size_t tnodes = 1;
        for (const auto& ax : rule.t_axes) tnodes *= ax.size();
        ggrid.assign(tnodes, 0.0);
        std::vector<std::size_t> tidx(r2, 0);
        for (std::size_t flat = 0; flat < tnodes; ++flat) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double prod = 1.0;
                for (std::size_t k = 0; k < r2; ++k) prod *= ttab[k][tidx[k] * n + i];
                acc += prod;
            }
            ggrid[flat] = acc / dn;
            for (std::size_t k = r2; k-- > 0;) {
                if (++tidx[k] < rule.t_axes[k].size()) break;
                tidx[k] = 0;
            }
        }
    } else {
        for (std::size_t j = 0; j < r1; ++j) {
            lax[j].assign(rule.s_axes[j].size(), 0.0);
            for (std::size_t k = 0; k < rule.s_axes[j].size(); ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += stab[j][k * n + i];
                lax[j][k] = acc / dn;
            }
        }
        for (std::size_t k2 = 0; k2 < r2; ++k2) {
            gax[k2].assign(rule.t_axes[k2].size(), 0.0);
            for (std::size_t q = 0; q < rule.t_axes[k2].size(); ++q) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += ttab[k2][q * n + i];
                gax[k2][q] = acc / dn;
            }
        }
    }

    // Axis weights with the statistic weight folded in analytically.
    std::vector<std::vector<double>> wax(r1 + r2);
    for (std::size_t j = 0; j < r1; ++j) {
        const auto& ax = rule.s_axes[j];
        wax[j].resize(ax.size());
        for (std::size_t k = 0; k < ax.size(); ++k) {
            wax[j][k] = ax.weights[k] * std::exp(-wp.a[j] * ax.nodes[k]);
        }
    }
    for (std::size_t k2 = 0; k2 < r2; ++k2) {
        const auto& ax = rule.t_axes[k2];
        wax[r1 + k2].resize(ax.size());
        for (std::size_t q = 0; q < ax.size(); ++q) {
            wax[r1 + k2][q] = ax.weights[q] * std::pow(ax.nodes[q], wp.b[k2]);
        }
    }

    const std::size_t d = r1 + r2;
    std::vector<std::size_t> sizes(d);
    for (std::size_t j = 0; j < r1; ++j) sizes[j] = rule.s_axes[j].size();
    for (std::size_t k = 0; k < r2; ++k) sizes[r1 + k] = rule.t_axes[k].size();

    std::vector<std::size_t> idx(d, 0);
    std::vector<double> wpref(d + 1);
    std::vector<const double*> rowptr(d);
    auto reset_level = [&](std::size_t lvl) {
        wpref[lvl + 1] = wpref[lvl] * wax[lvl][idx[lvl]];
        rowptr[lvl] = (lvl < r1) ? &stab[lvl][idx[lvl] * n] : &ttab[lvl - r1][idx[lvl] * n];
    };
    wpref[0] = 1.0;
    for (std::size_t lvl = 0; lvl < d; ++lvl) reset_level(lvl);

    // Flat index helpers for the two_vector marginal grids.
    auto sflat = [&]() {
        std::size_t f = 0;
        for (std::size_t j = 0; j < r1; ++j) f = f * sizes[j] + idx[j];
        return f;
    };
    auto tflat = [&]() {
        std::size_t f = 0;
        for (std::size_t k = 0; k < r2; ++k) f = f * sizes[r1 + k] + idx[r1 + k];
        return f;
    };

    double acc = 0.0;
    for (;;) {
        double psi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double prod = rowptr[0][i];
            for (std::size_t lvl = 1; lvl < d; ++lvl) prod *= rowptr[lvl][i];
            psi += prod;
        }
        psi /= dn;

        double marg;
        if (mode == Mode::two_vector) {
            marg = lgrid[sflat()] * ggrid[tflat()];
        } else {
            marg = 1.0;
            for (std::size_t j = 0; j < r1; ++j) marg *= lax[j][idx[j]];
            for (std::size_t k = 0; k < r2; ++k) marg *= gax[k][idx[r1 + k]];
        }
        const double xi = psi - marg;
        acc += (squared ? xi * xi : xi) * wpref[d];

        std::size_t lvl = d;
        for (;;) {
            if (lvl == 0) return acc;
            --lvl;
            if (++idx[lvl] < sizes[lvl]) break;
        }
        for (std::size_t l2 = lvl + 1; l2 < d; ++l2) idx[l2] = 0;
        for (std::size_t l2 = lvl; l2 < d; ++l2) reset_level(l2);
    }
}

} // namespace quad_detail

enum class OracleKind { I, T };

inline constexpr std::size_t kOracleMaxSampleSize = 50;
inline constexpr std::size_t kOracleDefaultNodes = 64;

// Evaluates I or T directly from the integral definition on a refining grid.
// The result is trusted only once doubling the node count moves it by less
// than 1e-8 relative; otherwise ConvergenceError.
inline double oracle_statistic(const MixedSample& sample, const WeightParams& wp,
                               OracleKind kind, Mode mode,
                               const QuadratureRule& rule) {
    if (sample.n() > kOracleMaxSampleSize) {
        throw DimensionError("oracle_statistic: oracle accepts n <= 50 only");
    }
    detail::check_weights(sample, wp);
    const bool squared = (kind == OracleKind::T);

    // Natural scale of the integrals: the total weight mass. Statistics that
    // cancel to (near) exact zero leave only rounding noise, so the relative
    // gate is floored at a small multiple of that scale.
    double wmass = 1.0;
    for (double a : wp.a) wmass /= a;
    for (double b : wp.b) wmass /= (b + 1.0);

    double coarse = quad_detail::statistic_integral(sample, wp, squared, mode, rule);
    std::size_t m = rule.m;
    for (int step = 0; step < 3; ++step) {
        const QuadratureRule finer_rule = rule.refined(2 * m);
        const double fine = quad_detail::statistic_integral(sample, wp, squared, mode, finer_rule);
        const double denom = std::max(std::abs(fine), 1e-6 * wmass);
        if (std::abs(fine - coarse) <= 1e-8 * denom) return fine;
        coarse = fine;
        m *= 2;
    }
    throw ConvergenceError("oracle_statistic: grid refinement did not stabilize");
}

inline double oracle_statistic(const MixedSample& sample, const WeightParams& wp,
                               OracleKind kind, Mode mode,
                               std::size_t m = kOracleDefaultNodes, bool laguerre = false) {
    const int order = (kind == OracleKind::T) ? 2 : 1;
    return oracle_statistic(sample, wp, kind, mode,
                            QuadratureRule::for_oracle(sample, wp, order, m, laguerre));
}

} // namespace mixedindep
