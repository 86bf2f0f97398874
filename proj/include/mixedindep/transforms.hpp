#pragma once

#include <cmath>
#include <cstddef>

#include "mixedindep/math/summation.hpp"
#include "mixedindep/sample.hpp"

namespace mixedindep {

namespace detail {

// t^y with the PGF convention 0^0 = 1.
inline double pow_count(double t, std::int64_t y) {
    if (y == 0) return 1.0;
    return std::pow(t, static_cast<double>(y));
}

inline double row_exp_factor(const MixedSample& sample, std::size_t i, const std::vector<double>& s) {
    double dot = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) dot += s[j] * sample.x(i, j);
    return std::exp(-dot);
}

inline double row_pow_factor(const MixedSample& sample, std::size_t i, const std::vector<double>& t) {
    double prod = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) prod *= pow_count(t[k], sample.y(i, k));
    return prod;
}

} // namespace detail

// Empirical joint transform psi_n(s,t) = (1/n) sum_i e^{-s.X_i} prod_k t_k^{Y_ik}.
inline double eval_psi_n(const MixedSample& sample, const TransformPoint& p) {
    detail::check_point(sample, p);
    const double sum = math::pairwise_sum(sample.n(), [&](std::size_t i) {
        return detail::row_exp_factor(sample, i, p.s) * detail::row_pow_factor(sample, i, p.t);
    });
    return sum / static_cast<double>(sample.n());
}

// Product of empirical marginal transforms at p.
//   two_vector: L_n(s) * G_n(t) with block-joint transforms,
//   total:      the full (r1+r2)-fold product of univariate transforms.
inline double eval_marginal_product(const MixedSample& sample, const TransformPoint& p, Mode mode) {
    detail::check_point(sample, p);
    const double n = static_cast<double>(sample.n());
    if (mode == Mode::two_vector) {
        const double l = math::pairwise_sum(sample.n(), [&](std::size_t i) {
                             return detail::row_exp_factor(sample, i, p.s);
                         }) / n;
        const double g = math::pairwise_sum(sample.n(), [&](std::size_t i) {
                             return detail::row_pow_factor(sample, i, p.t);
                         }) / n;
        return l * g;
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < sample.r1(); ++j) {
        prod *= math::pairwise_sum(sample.n(), [&](std::size_t i) {
                    return std::exp(-p.s[j] * sample.x(i, j));
                }) / n;
    }
    for (std::size_t k = 0; k < sample.r2(); ++k) {
        prod *= math::pairwise_sum(sample.n(), [&](std::size_t i) {
                    return detail::pow_count(p.t[k], sample.y(i, k));
                }) / n;
    }
    return prod;
}

// Empirical process xi_n = psi_n - (product of marginals); identically zero
// under exact factorization of the empirical transform.
inline double eval_xi_n(const MixedSample& sample, const TransformPoint& p, Mode mode) {
    return eval_psi_n(sample, p) - eval_marginal_product(sample, p, mode);
}

// Weight w(s,t) = exp(-sum_j a_j s_j) * prod_k t_k^{b_k}.
inline double eval_weight(const WeightParams& wp, const TransformPoint& p) {
    detail::check_weight_point(wp, p);
    double dot = 0.0;
    for (std::size_t j = 0; j < wp.a.size(); ++j) dot += wp.a[j] * p.s[j];
    double prod = std::exp(-dot);
    for (std::size_t k = 0; k < wp.b.size(); ++k) prod *= std::pow(p.t[k], wp.b[k]);
    return prod;
}

} // namespace mixedindep
