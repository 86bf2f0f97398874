#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/math/special.hpp"

namespace mixedindep {

// Marginal family with an exact quantile transform. Continuous families feed
// the X block, count families the Y block. Conventions: E(lambda) has mean
// 1/lambda, gamma(alpha, beta) has mean alpha/beta, NB(m, p) counts failures
// before the m-th success.
class MarginalSpec {
public:
    enum class Family { Exponential, Gamma, Poisson, NegBinomial, Binomial };

    MarginalSpec(Family family, double p1, double p2 = 0.0)
        : family_(family), p1_(p1), p2_(p2) {
        validate();
        if (is_count()) build_cdf_table();
    }

    static MarginalSpec exponential(double rate) { return {Family::Exponential, rate}; }
    static MarginalSpec gamma(double shape, double rate) { return {Family::Gamma, shape, rate}; }
    static MarginalSpec poisson(double mean) { return {Family::Poisson, mean}; }
    static MarginalSpec neg_binomial(double m, double p) { return {Family::NegBinomial, m, p}; }
    static MarginalSpec binomial(std::int64_t trials, double p) {
        return {Family::Binomial, static_cast<double>(trials), p};
    }

    // Accepts the compact table notation: E(1.5), gamma(5,1), P(2),
    // NB(2,0.4), B(10,0.4).
    static MarginalSpec parse(const std::string& text);

    Family family() const { return family_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }

    bool is_count() const {
        return family_ == Family::Poisson || family_ == Family::NegBinomial ||
               family_ == Family::Binomial;
    }

    std::string label() const {
        auto fmt = [](double v) {
            std::string r = std::to_string(v);
            r.erase(r.find_last_not_of('0') + 1);
            if (!r.empty() && r.back() == '.') r.pop_back();
            return r;
        };
        switch (family_) {
            case Family::Exponential: return "E(" + fmt(p1_) + ")";
            case Family::Gamma: return "gamma(" + fmt(p1_) + "," + fmt(p2_) + ")";
            case Family::Poisson: return "P(" + fmt(p1_) + ")";
            case Family::NegBinomial: return "NB(" + fmt(p1_) + "," + fmt(p2_) + ")";
            case Family::Binomial: return "B(" + fmt(p1_) + "," + fmt(p2_) + ")";
        }
        return "?";
    }

    // Inverse CDF. Continuous: analytic or bracketed root-find to 1e-12
    // relative; count: smallest k with CDF(k) >= u.
    double quantile(double u) const {
        if (!(u > 0.0 && u < 1.0)) {
            throw InvariantError("marginal_quantile: u must lie strictly inside (0,1)");
        }
        switch (family_) {
            case Family::Exponential:
                return -std::log1p(-u) / p1_;
            case Family::Gamma:
                return gamma_quantile(u);
            default: {
                const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
                if (it != cdf_.end()) {
                    return static_cast<double>(it - cdf_.begin());
                }
                return static_cast<double>(cdf_.size() - 1);
            }
        }
    }

    std::int64_t count_quantile(double u) const {
        return static_cast<std::int64_t>(quantile(u));
    }

    // pmf iteration for count families; f(k, p_k) until the tail mass drops
    // below `tail`.
    template <typename F>
    void for_each_pmf(double tail, F&& f) const {
        if (!is_count()) throw InvariantError("for_each_pmf: continuous family");
        double cum = 0.0;
        for (std::int64_t k = 0; cum < 1.0 - tail; ++k) {
            const double p = pmf(k);
            f(k, p);
            cum += p;
            if (family_ == Family::Binomial && k >= static_cast<std::int64_t>(p1_)) break;
            if (k > 2000000) throw ConvergenceError("for_each_pmf: tail did not close");
        }
    }

    double pmf(std::int64_t k) const {
        if (k < 0) return 0.0;
        const double kk = static_cast<double>(k);
        switch (family_) {
            case Family::Poisson:
                return std::exp(-p1_ + kk * std::log(p1_) - std::lgamma(kk + 1.0));
            case Family::NegBinomial:
                // C(k+m-1, k) p^m (1-p)^k
                return std::exp(std::lgamma(kk + p1_) - std::lgamma(kk + 1.0) -
                                std::lgamma(p1_) + p1_ * std::log(p2_) +
                                kk * std::log1p(-p2_));
            case Family::Binomial: {
                const double nn = p1_;
                if (kk > nn) return 0.0;
                return std::exp(std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) -
                                std::lgamma(nn - kk + 1.0) + kk * std::log(p2_) +
                                (nn - kk) * std::log1p(-p2_));
            }
            default:
                throw InvariantError("pmf: continuous family");
        }
    }

private:
    void validate() const {
        switch (family_) {
            case Family::Exponential:
                if (!(p1_ > 0.0)) throw InvariantError("E(rate): rate must be positive");
                break;
            case Family::Gamma:
                if (!(p1_ > 0.0) || !(p2_ > 0.0)) {
                    throw InvariantError("gamma(shape,rate): parameters must be positive");
                }
                break;
            case Family::Poisson:
                if (!(p1_ > 0.0)) throw InvariantError("P(mean): mean must be positive");
                break;
            case Family::NegBinomial:
                if (!(p1_ > 0.0) || !(p2_ > 0.0 && p2_ < 1.0)) {
                    throw InvariantError("NB(m,p): need m > 0 and p in (0,1)");
                }
                break;
            case Family::Binomial:
                if (!(p1_ >= 1.0) || p1_ != std::floor(p1_) || !(p2_ > 0.0 && p2_ < 1.0)) {
                    throw InvariantError("B(N,p): need integer N >= 1 and p in (0,1)");
                }
                break;
        }
    }

    void build_cdf_table() {
        cdf_.clear();
        double cum = 0.0;
        std::int64_t k = 0;
        while (cum < 1.0 - 1e-16) {
            cum += pmf(k);
            cdf_.push_back(std::min(cum, 1.0));
            if (family_ == Family::Binomial && k >= static_cast<std::int64_t>(p1_)) break;
            if (k > 5000000) break;
            ++k;
        }
        cdf_.back() = 1.0;
    }

    // P(shape, rate*x) = u by Wilson-Hilferty start plus safeguarded Newton.
    double gamma_quantile(double u) const {
        const double shape = p1_;
        const double z = math::norm_quantile(u);
        const double c = 1.0 / (9.0 * shape);
        double g = shape * std::pow(std::max(1e-8, 1.0 - c + z * std::sqrt(c)), 3.0);
        if (!(g > 0.0) || !std::isfinite(g)) g = shape;
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 200; ++iter) {
            const double f = math::gamma_p(shape, g) - u;
            if (f > 0.0) {
                hi = g;
            } else {
                lo = g;
            }
            const double pdf = math::gamma_pdf_unit_rate(shape, g);
            double next = (pdf > 0.0) ? g - f / pdf : g;
            if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
                next = std::isfinite(hi) ? 0.5 * (lo + hi) : std::max(2.0 * g, 1e-6);
            }
            if (std::abs(next - g) <= 1e-12 * std::max(next, 1e-300)) {
                g = next;
                break;
            }
            g = next;
        }
        return g / p2_;
    }

    Family family_;
    double p1_, p2_;
    std::vector<double> cdf_;
};

inline MarginalSpec MarginalSpec::parse(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ConfigError("cannot parse marginal spec '" + text + "'");
    }
    std::string name = text.substr(0, open);
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const std::string args = text.substr(open + 1, close - open - 1);
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos < args.size()) {
        auto comma = args.find(',', pos);
        if (comma == std::string::npos) comma = args.size();
        try {
            vals.push_back(std::stod(args.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse marginal parameters in '" + text + "'");
        }
        pos = comma + 1;
    }
    auto need = [&](std::size_t k) {
        if (vals.size() != k) throw ConfigError("marginal '" + text + "' expects " +
                                                std::to_string(k) + " parameter(s)");
    };
    if (name == "e" || name == "exp" || name == "exponential") {
        need(1);
        return exponential(vals[0]);
    }
    if (name == "gamma" || name == "g") {
        need(2);
        return gamma(vals[0], vals[1]);
    }
    if (name == "p" || name == "poisson") {
        need(1);
        return poisson(vals[0]);
    }
    if (name == "nb" || name == "negbinomial") {
        need(2);
        return neg_binomial(vals[0], vals[1]);
    }
    if (name == "b" || name == "binomial") {
        need(2);
        if (vals[0] != std::floor(vals[0])) {
            throw InvariantError("B(N,p): trial count must be an integer");
        }
        return binomial(static_cast<std::int64_t>(vals[0]), vals[1]);
    }
    throw ConfigError("unknown marginal family in '" + text + "'");
}

} // namespace mixedindep
