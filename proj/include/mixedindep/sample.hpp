#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixedindep/errors.hpp"

namespace mixedindep {

// two_vector: test the X-block against the Y-block.
// total:      test joint factorization into all r1+r2 univariate marginals.
enum class Mode { two_vector, total };

inline const char* to_string(Mode mode) {
    return mode == Mode::two_vector ? "two_vector" : "total";
}

// n rows of (X in R_+^{r1}, Y in N_0^{r2}), row-major storage.
// Every X entry is strictly positive, every Y entry a nonnegative integer.
class MixedSample {
public:
    MixedSample(std::vector<double> x, std::vector<std::int64_t> y,
                std::size_t r1, std::size_t r2)
        : x_(std::move(x)), y_(std::move(y)), r1_(r1), r2_(r2) {
        if (r1_ == 0 || r2_ == 0) {
            throw DimensionError("MixedSample: need at least one continuous and one count column");
        }
        if (x_.size() % r1_ != 0 || y_.size() % r2_ != 0) {
            throw DimensionError("MixedSample: data size is not a multiple of the column count");
        }
        n_ = x_.size() / r1_;
        if (n_ == 0) throw DimensionError("MixedSample: empty sample");
        if (y_.size() / r2_ != n_) {
            throw DimensionError("MixedSample: X and Y blocks disagree on the row count");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < r1_; ++j) {
                const double v = x_[i * r1_ + j];
                if (!(v > 0.0) || !std::isfinite(v)) {
                    throw InvariantError("MixedSample: continuous cell at row " + std::to_string(i) +
                                         ", column " + std::to_string(j) +
                                         " must be a finite positive number (got " +
                                         std::to_string(v) + ")");
                }
            }
            for (std::size_t k = 0; k < r2_; ++k) {
                if (y_[i * r2_ + k] < 0) {
                    throw InvariantError("MixedSample: count cell at row " + std::to_string(i) +
                                         ", column " + std::to_string(k) +
                                         " must be a nonnegative integer (got " +
                                         std::to_string(y_[i * r2_ + k]) + ")");
                }
            }
        }
    }

    std::size_t n() const { return n_; }
    std::size_t r1() const { return r1_; }
    std::size_t r2() const { return r2_; }

    double x(std::size_t row, std::size_t col) const { return x_[row * r1_ + col]; }
    std::int64_t y(std::size_t row, std::size_t col) const { return y_[row * r2_ + col]; }

    const std::vector<double>& x_data() const { return x_; }
    const std::vector<std::int64_t>& y_data() const { return y_; }

    // Rebinds X rows to Y rows through `perm`: row i pairs with Y row perm[i].
    MixedSample with_y_rows(const std::vector<std::size_t>& perm) const {
        std::vector<std::int64_t> y(n_ * r2_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < r2_; ++k) y[i * r2_ + k] = this->y(perm[i], k);
        }
        return MixedSample(x_, std::move(y), r1_, r2_);
    }

private:
    std::vector<double> x_;
    std::vector<std::int64_t> y_;
    std::size_t r1_;
    std::size_t r2_;
    std::size_t n_ = 0;
};

// Evaluation point: s in R_+^{r1}, t in [0,1]^{r2}.
struct TransformPoint {
    std::vector<double> s;
    std::vector<double> t;
};

// Tuning vectors of the weight w(s,t) = exp(-sum a_j s_j) * prod t_k^{b_k}.
struct WeightParams {
    std::vector<double> a;
    std::vector<double> b;

    static WeightParams scalar(double a, double b, std::size_t r1 = 1, std::size_t r2 = 1) {
        return WeightParams{std::vector<double>(r1, a), std::vector<double>(r2, b)};
    }
};

namespace detail {

inline void check_point(const MixedSample& sample, const TransformPoint& p) {
    if (p.s.size() != sample.r1() || p.t.size() != sample.r2()) {
        throw DimensionError("transform point dimensions do not match the sample");
    }
}

inline void check_weights(const MixedSample& sample, const WeightParams& wp) {
    if (wp.a.size() != sample.r1() || wp.b.size() != sample.r2()) {
        throw DimensionError("weight parameter dimensions do not match the sample");
    }
    for (double v : wp.a) {
        if (!(v > 0.0)) throw InvariantError("weight parameter a must be strictly positive");
    }
    for (double v : wp.b) {
        if (!(v > 0.0)) throw InvariantError("weight parameter b must be strictly positive");
    }
}

inline void check_weight_point(const WeightParams& wp, const TransformPoint& p) {
    if (wp.a.size() != p.s.size() || wp.b.size() != p.t.size()) {
        throw DimensionError("weight parameter dimensions do not match the point");
    }
}

} // namespace detail

} // namespace mixedindep
