#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "mixedindep/math/summation.hpp"
#include "mixedindep/quadrature.hpp"
#include "mixedindep/sample.hpp"
#include "mixedindep/variance.hpp"

namespace mixedindep {

namespace stat_detail {

// Row-wise products prod_j 1/(X_ij + a_j) and prod_k 1/(Y_ik + b_k + 1).
inline void recip_rows(const MixedSample& sample, const WeightParams& wp,
                       std::vector<double>& rx, std::vector<double>& ry) {
    const std::size_t n = sample.n();
    rx.resize(n);
    ry.resize(n);
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
}

} // namespace stat_detail

// I statistic: the weighted integral of xi_n in closed form. O(n*(r1+r2)).
inline double i_statistic(const MixedSample& sample, const WeightParams& wp, Mode mode) {
    detail::check_weights(sample, wp);
    const std::size_t n = sample.n();
    const double dn = static_cast<double>(n);

    std::vector<double> rx, ry;
    stat_detail::recip_rows(sample, wp, rx, ry);
    const double term1 =
        math::pairwise_sum(n, [&](std::size_t i) { return rx[i] * ry[i]; }) / dn;

    double term2;
    if (mode == Mode::two_vector) {
        const double sx = math::pairwise_sum(n, [&](std::size_t i) { return rx[i]; }) / dn;
        const double sy = math::pairwise_sum(n, [&](std::size_t i) { return ry[i]; }) / dn;
        term2 = sx * sy;
    } else {
        term2 = 1.0;
        for (std::size_t j = 0; j < sample.r1(); ++j) {
            term2 *= math::pairwise_sum(n, [&](std::size_t i) {
                         return 1.0 / (sample.x(i, j) + wp.a[j]);
                     }) / dn;
        }
        for (std::size_t k = 0; k < sample.r2(); ++k) {
            term2 *= math::pairwise_sum(n, [&](std::size_t i) {
                         return 1.0 / (static_cast<double>(sample.y(i, k)) + wp.b[k] + 1.0);
                     }) / dn;
        }
    }
    return term1 - term2;
}

// T statistic: three-term closed form of the squared-process integral. The
// cross term is factorized per coordinate, O(n^2*(r1+r2)); the naive
// multi-index sum is exponential in r1+r2 and exists only in the test suite.
inline double t_statistic(const MixedSample& sample, const WeightParams& wp, Mode mode) {
    detail::check_weights(sample, wp);
    const std::size_t n = sample.n();
    const std::size_t r1 = sample.r1();
    const std::size_t r2 = sample.r2();
    const double dn = static_cast<double>(n);
    const double dn2 = dn * dn;

    // Per-axis pairwise reciprocal sums, sx[j][i] = sum_l 1/(X_ij + X_lj + a_j);
    // only the total-mode terms need them.
    std::vector<std::vector<double>> sx, sy;
    if (mode == Mode::total) {
        sx.assign(r1, std::vector<double>(n, 0.0));
        sy.assign(r2, std::vector<double>(n, 0.0));
        for (std::size_t j = 0; j < r1; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    acc += 1.0 / (sample.x(i, j) + sample.x(l, j) + wp.a[j]);
                }
                sx[j][i] = acc;
            }
        }
        for (std::size_t k = 0; k < r2; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) {
                    acc += 1.0 /
                           (static_cast<double>(sample.y(i, k) + sample.y(l, k)) + wp.b[k] + 1.0);
                }
                sy[k][i] = acc;
            }
        }
    }

    double term1 = 0.0;
    double sxx = 0.0, syy = 0.0;           // two_vector pair sums of row products
    std::vector<double> ux(n), uy(n);      // cross-term row factors
    for (std::size_t i = 0; i < n; ++i) {
        double rowxy = 0.0, rowx = 0.0, rowy = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            double px = 1.0;
            for (std::size_t j = 0; j < r1; ++j) {
                px *= 1.0 / (sample.x(i, j) + sample.x(l, j) + wp.a[j]);
            }
            double py = 1.0;
            for (std::size_t k = 0; k < r2; ++k) {
                py *= 1.0 / (static_cast<double>(sample.y(i, k) + sample.y(l, k)) + wp.b[k] + 1.0);
            }
            rowxy += px * py;
            rowx += px;
            rowy += py;
        }
        term1 += rowxy;
        sxx += rowx;
        syy += rowy;
        if (mode == Mode::two_vector) {
            ux[i] = rowx / dn;
            uy[i] = rowy / dn;
        } else {
            double prodx = 1.0;
            for (std::size_t j = 0; j < r1; ++j) prodx *= sx[j][i] / dn;
            double prody = 1.0;
            for (std::size_t k = 0; k < r2; ++k) prody *= sy[k][i] / dn;
            ux[i] = prodx;
            uy[i] = prody;
        }
    }
    term1 /= dn2;

    double term2;
    if (mode == Mode::two_vector) {
        term2 = (sxx / dn2) * (syy / dn2);
    } else {
        term2 = 1.0;
        for (std::size_t j = 0; j < r1; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += sx[j][i];
            term2 *= acc / dn2;
        }
        for (std::size_t k = 0; k < r2; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += sy[k][i];
            term2 *= acc / dn2;
        }
    }

    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) cross += ux[i] * uy[i];
    cross = 2.0 * cross / dn;

    return term1 + term2 - cross;
}

// sqrt(n) * I_n / sigma_hat. Throws DegenerateVariance when the estimate is
// zero (constant transformed column), signalling the test is inapplicable.
inline double standardized_i(const MixedSample& sample, const WeightParams& wp, Mode mode) {
    if (sample.n() < 2) throw DimensionError("standardized_i: need n >= 2");
    const double s2 = sigma_hat(sample, wp, mode);
    if (!(s2 > 0.0)) {
        throw DegenerateVariance("standardized_i: variance estimate is zero");
    }
    return std::sqrt(static_cast<double>(sample.n())) * i_statistic(sample, wp, mode) /
           std::sqrt(s2);
}

// ---------------------------------------------------------------------------
// Characteristic-function competitor.
//
// D = n * integral of |C_n(s,t) - product of marginal ecfs|^2 v(s,t) over
// R_+^{r1} x [0,1]^{r2}, with v Gaussian in every coordinate. Evaluated on a
// tensor grid; per-row exponential tables are cached so permutation streams
// reuse them (the statistic itself stays a pure function of its inputs).
// ---------------------------------------------------------------------------

struct DSigma {
    std::vector<double> s;  // per continuous axis
    std::vector<double> t;  // per count axis

    static DSigma scalar(double sigma, std::size_t r1, std::size_t r2) {
        return DSigma{std::vector<double>(r1, sigma), std::vector<double>(r2, sigma)};
    }
};

inline constexpr std::size_t kDStatDefaultNodes = 32;

class DStatEvaluator {
public:
    DStatEvaluator(const MixedSample& sample, const DSigma& sigma, Mode mode,
                   const QuadratureRule& rule)
        : n_(sample.n()), r1_(sample.r1()), r2_(sample.r2()), mode_(mode) {
        if (sigma.s.size() != r1_ || sigma.t.size() != r2_) {
            throw DimensionError("DStatEvaluator: sigma dimensions do not match the sample");
        }
        for (double v : sigma.s) {
            if (!(v > 0.0)) throw InvariantError("DStatEvaluator: sigma components must be positive");
        }
        for (double v : sigma.t) {
            if (!(v > 0.0)) throw InvariantError("DStatEvaluator: sigma components must be positive");
        }
        if (rule.s_axes.size() != r1_ || rule.t_axes.size() != r2_) {
            throw DimensionError("DStatEvaluator: rule dimensions do not match the sample");
        }

        const std::size_t d = r1_ + r2_;
        sizes_.resize(d);
        re_.resize(d);
        im_.resize(d);
        wax_.resize(d);
        for (std::size_t ax = 0; ax < d; ++ax) {
            const bool cont = ax < r1_;
            const AxisRule& arule = cont ? rule.s_axes[ax] : rule.t_axes[ax - r1_];
            const double sig = cont ? sigma.s[ax] : sigma.t[ax - r1_];
            const std::size_t m = arule.size();
            sizes_[ax] = m;
            re_[ax].resize(m * n_);
            im_[ax].resize(m * n_);
            wax_[ax].resize(m);
            for (std::size_t k = 0; k < m; ++k) {
                const double node = arule.nodes[k];
                wax_[ax][k] = arule.weights[k] * std::exp(-0.5 * sig * sig * node * node);
                for (std::size_t i = 0; i < n_; ++i) {
                    const double v = cont ? sample.x(i, ax)
                                          : static_cast<double>(sample.y(i, ax - r1_));
                    re_[ax][k * n_ + i] = std::cos(node * v);
                    im_[ax][k * n_ + i] = std::sin(node * v);
                }
            }
        }

        sgrid_ = 1;
        for (std::size_t j = 0; j < r1_; ++j) sgrid_ *= sizes_[j];
        tgrid_ = 1;
        for (std::size_t k = 0; k < r2_; ++k) tgrid_ *= sizes_[r1_ + k];

        if (mode_ == Mode::two_vector) {
            build_block_products();
        } else {
            // Univariate marginal ecfs; invariant under per-column permutation.
            marg_re_.resize(d);
            marg_im_.resize(d);
            for (std::size_t ax = 0; ax < d; ++ax) {
                marg_re_[ax].assign(sizes_[ax], 0.0);
                marg_im_[ax].assign(sizes_[ax], 0.0);
                for (std::size_t k = 0; k < sizes_[ax]; ++k) {
                    double ar = 0.0, ai = 0.0;
                    for (std::size_t i = 0; i < n_; ++i) {
                        ar += re_[ax][k * n_ + i];
                        ai += im_[ax][k * n_ + i];
                    }
                    marg_re_[ax][k] = ar / static_cast<double>(n_);
                    marg_im_[ax][k] = ai / static_cast<double>(n_);
                }
            }
        }

        // Node weight products over the full grid.
        wflat_.assign(sgrid_ * tgrid_, 0.0);
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t flat = 0; flat < sgrid_ * tgrid_; ++flat) {
            double w = 1.0;
            for (std::size_t ax = 0; ax < d; ++ax) w *= wax_[ax][idx[ax]];
            wflat_[flat] = w;
            for (std::size_t ax = d; ax-- > 0;) {
                if (++idx[ax] < sizes_[ax]) break;
                idx[ax] = 0;
            }
        }
    }

    std::size_t n() const { return n_; }
    Mode mode() const { return mode_; }

    // Observed value (identity permutation on every axis).
    double value() const {
        std::vector<std::size_t> id(n_);
        std::iota(id.begin(), id.end(), std::size_t{0});
        return mode_ == Mode::two_vector ? value_two_vector(id) : value_total({});
    }

    // two_vector null stream: Y rows rebound through `perm`.
    double value_two_vector(const std::vector<std::size_t>& perm) const {
        std::vector<double> jr(sgrid_ * tgrid_, 0.0), ji(sgrid_ * tgrid_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* xr = &xo_re_[i * sgrid_];
            const double* xi = &xo_im_[i * sgrid_];
            const double* yr = &yo_re_[perm[i] * tgrid_];
            const double* yi = &yo_im_[perm[i] * tgrid_];
            for (std::size_t fs = 0; fs < sgrid_; ++fs) {
                const double a = xr[fs];
                const double b = xi[fs];
                double* jrp = &jr[fs * tgrid_];
                double* jip = &ji[fs * tgrid_];
                for (std::size_t ft = 0; ft < tgrid_; ++ft) {
                    jrp[ft] += a * yr[ft] - b * yi[ft];
                    jip[ft] += a * yi[ft] + b * yr[ft];
                }
            }
        }
        const double dn = static_cast<double>(n_);
        double acc = 0.0;
        for (std::size_t fs = 0; fs < sgrid_; ++fs) {
            for (std::size_t ft = 0; ft < tgrid_; ++ft) {
                const std::size_t flat = fs * tgrid_ + ft;
                const double dr = jr[flat] / dn -
                                  (cx_re_[fs] * cy_re_[ft] - cx_im_[fs] * cy_im_[ft]);
                const double di = ji[flat] / dn -
                                  (cx_re_[fs] * cy_im_[ft] + cx_im_[fs] * cy_re_[ft]);
                acc += (dr * dr + di * di) * wflat_[flat];
            }
        }
        return dn * acc;
    }

    // total null stream: column `ax` rebound through perms[ax] (empty = identity).
    double value_total(const std::vector<std::vector<std::size_t>>& perms) const {
        const std::size_t d = r1_ + r2_;
        const double dn = static_cast<double>(n_);
        std::vector<double> jr(sgrid_ * tgrid_, 0.0), ji(sgrid_ * tgrid_, 0.0);
        std::vector<const double*> rre(d), rim(d);
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t flat = 0; flat < sgrid_ * tgrid_; ++flat) {
            for (std::size_t ax = 0; ax < d; ++ax) {
                rre[ax] = &re_[ax][idx[ax] * n_];
                rim[ax] = &im_[ax][idx[ax] * n_];
            }
            double ar = 0.0, ai = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                double pr = 1.0, pi = 0.0;
                for (std::size_t ax = 0; ax < d; ++ax) {
                    const std::size_t row =
                        (ax < perms.size() && !perms[ax].empty()) ? perms[ax][i] : i;
                    const double cr = rre[ax][row];
                    const double ci = rim[ax][row];
                    const double nr = pr * cr - pi * ci;
                    pi = pr * ci + pi * cr;
                    pr = nr;
                }
                ar += pr;
                ai += pi;
            }
            double mr = 1.0, mi = 0.0;
            for (std::size_t ax = 0; ax < d; ++ax) {
                const double cr = marg_re_[ax][idx[ax]];
                const double ci = marg_im_[ax][idx[ax]];
                const double nr = mr * cr - mi * ci;
                mi = mr * ci + mi * cr;
                mr = nr;
            }
            const double dr = ar / dn - mr;
            const double di = ai / dn - mi;
            jr[flat] = dr;
            ji[flat] = di;
            for (std::size_t ax = d; ax-- > 0;) {
                if (++idx[ax] < sizes_[ax]) break;
                idx[ax] = 0;
            }
        }
        double acc = 0.0;
        for (std::size_t flat = 0; flat < sgrid_ * tgrid_; ++flat) {
            acc += (jr[flat] * jr[flat] + ji[flat] * ji[flat]) * wflat_[flat];
        }
        return dn * acc;
    }

private:
    void build_block_products() {
        const double dn = static_cast<double>(n_);
        xo_re_.assign(n_ * sgrid_, 0.0);
        xo_im_.assign(n_ * sgrid_, 0.0);
        yo_re_.assign(n_ * tgrid_, 0.0);
        yo_im_.assign(n_ * tgrid_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            std::vector<std::size_t> idx(r1_, 0);
            for (std::size_t fs = 0; fs < sgrid_; ++fs) {
                double pr = 1.0, pi = 0.0;
                for (std::size_t j = 0; j < r1_; ++j) {
                    const double cr = re_[j][idx[j] * n_ + i];
                    const double ci = im_[j][idx[j] * n_ + i];
                    const double nr = pr * cr - pi * ci;
                    pi = pr * ci + pi * cr;
                    pr = nr;
                }
                xo_re_[i * sgrid_ + fs] = pr;
                xo_im_[i * sgrid_ + fs] = pi;
                for (std::size_t j = r1_; j-- > 0;) {
                    if (++idx[j] < sizes_[j]) break;
                    idx[j] = 0;
                }
            }
            std::vector<std::size_t> tdx(r2_, 0);
            for (std::size_t ft = 0; ft < tgrid_; ++ft) {
                double pr = 1.0, pi = 0.0;
                for (std::size_t k = 0; k < r2_; ++k) {
                    const double cr = re_[r1_ + k][tdx[k] * n_ + i];
                    const double ci = im_[r1_ + k][tdx[k] * n_ + i];
                    const double nr = pr * cr - pi * ci;
                    pi = pr * ci + pi * cr;
                    pr = nr;
                }
                yo_re_[i * tgrid_ + ft] = pr;
                yo_im_[i * tgrid_ + ft] = pi;
                for (std::size_t k = r2_; k-- > 0;) {
                    if (++tdx[k] < sizes_[r1_ + k]) break;
                    tdx[k] = 0;
                }
            }
        }
        cx_re_.assign(sgrid_, 0.0);
        cx_im_.assign(sgrid_, 0.0);
        cy_re_.assign(tgrid_, 0.0);
        cy_im_.assign(tgrid_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t fs = 0; fs < sgrid_; ++fs) {
                cx_re_[fs] += xo_re_[i * sgrid_ + fs];
                cx_im_[fs] += xo_im_[i * sgrid_ + fs];
            }
            for (std::size_t ft = 0; ft < tgrid_; ++ft) {
                cy_re_[ft] += yo_re_[i * tgrid_ + ft];
                cy_im_[ft] += yo_im_[i * tgrid_ + ft];
            }
        }
        for (std::size_t fs = 0; fs < sgrid_; ++fs) {
            cx_re_[fs] /= dn;
            cx_im_[fs] /= dn;
        }
        for (std::size_t ft = 0; ft < tgrid_; ++ft) {
            cy_re_[ft] /= dn;
            cy_im_[ft] /= dn;
        }
    }

    std::size_t n_, r1_, r2_;
    Mode mode_;
    std::vector<std::size_t> sizes_;
    std::vector<std::vector<double>> re_, im_, wax_;
    std::vector<std::vector<double>> marg_re_, marg_im_;  // total mode
    std::vector<double> xo_re_, xo_im_, yo_re_, yo_im_;   // two_vector block products
    std::vector<double> cx_re_, cx_im_, cy_re_, cy_im_;
    std::vector<double> wflat_;
    std::size_t sgrid_ = 1, tgrid_ = 1;
};

inline double d_statistic(const MixedSample& sample, const DSigma& sigma, Mode mode,
                          const QuadratureRule& rule) {
    return DStatEvaluator(sample, sigma, mode, rule).value();
}

inline double d_statistic(const MixedSample& sample, const DSigma& sigma, Mode mode,
                          std::size_t m = kDStatDefaultNodes) {
    return d_statistic(sample, sigma, mode,
                       QuadratureRule::for_cf_statistic(sigma.s, sample.r2(), m));
}

// ---------------------------------------------------------------------------
// Statistic selection records shared by the inference engine and the CLI.
// ---------------------------------------------------------------------------

enum class StatFamily { I, T, StI, D };

inline const char* to_string(StatFamily f) {
    switch (f) {
        case StatFamily::I: return "I";
        case StatFamily::T: return "T";
        case StatFamily::StI: return "st.I";
        case StatFamily::D: return "D";
    }
    return "?";
}

// Recommended defaults when the user supplies no tuning: a=1, b=5 for the
// two-vector tests and a=1, b=1 for total independence.
inline WeightParams default_weights(Mode mode, std::size_t r1, std::size_t r2) {
    return WeightParams::scalar(1.0, mode == Mode::two_vector ? 5.0 : 1.0, r1, r2);
}

struct StatisticSpec {
    StatFamily family = StatFamily::T;
    Mode mode = Mode::two_vector;
    WeightParams wp;                // I / T / StI
    double d_sigma = 0.5;           // D
    std::size_t d_nodes = kDStatDefaultNodes;

    // Signed statistics are compared through |.| in permutation tests.
    bool signed_statistic() const {
        return family == StatFamily::I || family == StatFamily::StI;
    }

    std::string label() const {
        if (family == StatFamily::D) return "D";
        std::string s = to_string(family);
        s += "(";
        auto fmt = [](double v) {
            std::string r = std::to_string(v);
            r.erase(r.find_last_not_of('0') + 1);
            if (!r.empty() && r.back() == '.') r.pop_back();
            return r;
        };
        s += fmt(wp.a[0]);
        s += ",";
        s += fmt(wp.b[0]);
        s += ")";
        return s;
    }
};

struct StatValue {
    double value = 0.0;
    StatisticSpec spec;
    std::size_t n = 0;
};

inline double evaluate_statistic(const MixedSample& sample, const StatisticSpec& spec) {
    switch (spec.family) {
        case StatFamily::I: return i_statistic(sample, spec.wp, spec.mode);
        case StatFamily::T: return t_statistic(sample, spec.wp, spec.mode);
        case StatFamily::StI: return standardized_i(sample, spec.wp, spec.mode);
        case StatFamily::D:
            return d_statistic(sample, DSigma::scalar(spec.d_sigma, sample.r1(), sample.r2()),
                               spec.mode, spec.d_nodes);
    }
    throw std::logic_error("evaluate_statistic: unknown statistic family");
}

} // namespace mixedindep
