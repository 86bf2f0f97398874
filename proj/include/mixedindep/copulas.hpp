#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/math/special.hpp"
#include "mixedindep/rng.hpp"

namespace mixedindep {

namespace cop_detail {

inline double clamp_unit(double u) {
    return std::clamp(u, 1e-12, 1.0 - 1e-12);
}

// Kanter's representation of the positive alpha-stable law with Laplace
// transform exp(-s^alpha), alpha in (0,1).
inline double positive_stable(double alpha, Rng& rng) {
    const double theta = std::numbers::pi * rng.uniform01();
    const double w = rng.exponential();
    const double sa = std::sin(alpha * theta);
    const double s1a = std::sin((1.0 - alpha) * theta);
    const double st = std::sin(theta);
    return sa * std::pow(st, -1.0 / alpha) * std::pow(s1a / w, (1.0 - alpha) / alpha);
}

// Sibuya(alpha) via exact inversion of the survival function
// S(k) = Gamma(k+1-alpha) / (Gamma(1-alpha) Gamma(k+1)), binary search on k.
inline double sibuya(double alpha, Rng& rng) {
    const double w = rng.uniform01();
    auto survival_log = [&](double k) {
        return std::lgamma(k + 1.0 - alpha) - std::lgamma(k + 1.0) - std::lgamma(1.0 - alpha);
    };
    if (std::log(w) >= survival_log(1.0)) return 1.0;
    // S(k) ~ k^{-alpha}/Gamma(1-alpha): asymptotic cap, then bisect integers.
    double hi = std::pow(w * std::tgamma(1.0 - alpha), -1.0 / alpha) * 4.0 + 16.0;
    if (!std::isfinite(hi)) hi = 1e18;
    double lo = 1.0;
    while (survival_log(hi) > std::log(w)) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e300) break;
    }
    // smallest integer k with S(k) <= w
    while (hi - lo > 0.5) {
        const double mid = std::floor(0.5 * (lo + hi));
        if (mid <= lo || mid >= hi) break;
        if (survival_log(mid) <= std::log(w)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace cop_detail

// Bivariate copula family with parameter theta. All families here are
// exchangeable, so a single h(u|v) = dC/dv covers both conditionals.
struct CopulaModel {
    enum class Family { Independence, Gaussian, Clayton, Gumbel, Joe };
    Family family = Family::Independence;
    double theta = 0.0;

    static CopulaModel independence() { return {Family::Independence, 0.0}; }
    static CopulaModel gaussian(double theta) { return make(Family::Gaussian, theta); }
    static CopulaModel clayton(double theta) { return make(Family::Clayton, theta); }
    static CopulaModel gumbel(double theta) { return make(Family::Gumbel, theta); }
    static CopulaModel joe(double theta) { return make(Family::Joe, theta); }

    static CopulaModel make(Family f, double theta) {
        CopulaModel m{f, theta};
        m.validate();
        return m;
    }

    void validate() const {
        switch (family) {
            case Family::Independence:
                break;
            case Family::Gaussian:
                if (!(theta > -1.0 && theta < 1.0)) {
                    throw InvariantError("Gaussian copula needs theta in (-1,1)");
                }
                break;
            case Family::Clayton:
                if (!(theta > 0.0)) throw InvariantError("Clayton copula needs theta > 0");
                break;
            case Family::Gumbel:
                if (!(theta >= 1.0)) throw InvariantError("Gumbel copula needs theta >= 1");
                break;
            case Family::Joe:
                if (!(theta >= 1.0)) throw InvariantError("Joe copula needs theta >= 1");
                break;
        }
    }

    bool is_independence() const {
        return family == Family::Independence ||
               (family == Family::Gaussian && theta == 0.0) ||
               (family == Family::Gumbel && theta == 1.0) ||
               (family == Family::Joe && theta == 1.0);
    }

    // Parses the table notation: Ga(0.55), Cl(0.5), Gu(1.5), Joe(2), Ind.
    static CopulaModel parse(const std::string& text);

    std::string label() const {
        auto fmt = [](double v) {
            std::string r = std::to_string(v);
            r.erase(r.find_last_not_of('0') + 1);
            if (!r.empty() && r.back() == '.') r.pop_back();
            return r;
        };
        switch (family) {
            case Family::Independence: return "Ind";
            case Family::Gaussian: return "Ga(" + fmt(theta) + ")";
            case Family::Clayton: return "Cl(" + fmt(theta) + ")";
            case Family::Gumbel: return "Gu(" + fmt(theta) + ")";
            case Family::Joe: return "Joe(" + fmt(theta) + ")";
        }
        return "?";
    }
};

// Conditional distribution h(u|v) = dC(u,v)/dv.
inline double copula_h(const CopulaModel& m, double u, double v) {
    u = cop_detail::clamp_unit(u);
    v = cop_detail::clamp_unit(v);
    if (m.is_independence()) return u;
    switch (m.family) {
        case CopulaModel::Family::Gaussian: {
            const double x = math::norm_quantile(u);
            const double y = math::norm_quantile(v);
            return math::norm_cdf((x - m.theta * y) / std::sqrt(1.0 - m.theta * m.theta));
        }
        case CopulaModel::Family::Clayton: {
            const double t = m.theta;
            return std::pow(v, -t - 1.0) *
                   std::pow(std::pow(u, -t) + std::pow(v, -t) - 1.0, -1.0 / t - 1.0);
        }
        case CopulaModel::Family::Gumbel: {
            const double t = m.theta;
            const double lu = -std::log(u), lv = -std::log(v);
            const double sum = std::pow(lu, t) + std::pow(lv, t);
            const double c = std::exp(-std::pow(sum, 1.0 / t));
            return c * std::pow(sum, 1.0 / t - 1.0) * std::pow(lv, t - 1.0) / v;
        }
        case CopulaModel::Family::Joe: {
            const double t = m.theta;
            const double a = std::pow(1.0 - u, t), b = std::pow(1.0 - v, t);
            const double core = a + b - a * b;
            return std::pow(core, 1.0 / t - 1.0) * std::pow(1.0 - v, t - 1.0) * (1.0 - a);
        }
        default:
            return u;
    }
}

// Inverse of h in its first argument. Closed form for Gaussian and Clayton;
// monotone bisection to 1e-10 for Gumbel and Joe.
inline double copula_hinv(const CopulaModel& m, double w, double v) {
    w = cop_detail::clamp_unit(w);
    v = cop_detail::clamp_unit(v);
    if (m.is_independence()) return w;
    switch (m.family) {
        case CopulaModel::Family::Gaussian: {
            const double z = math::norm_quantile(w);
            const double y = math::norm_quantile(v);
            return math::norm_cdf(z * std::sqrt(1.0 - m.theta * m.theta) + m.theta * y);
        }
        case CopulaModel::Family::Clayton: {
            const double t = m.theta;
            const double inner =
                std::pow(w * std::pow(v, t + 1.0), -t / (t + 1.0)) + 1.0 - std::pow(v, -t);
            return std::pow(std::max(inner, 1e-300), -1.0 / t);
        }
        case CopulaModel::Family::Gumbel:
        case CopulaModel::Family::Joe: {
            double lo = 1e-12, hi = 1.0 - 1e-12;
            for (int iter = 0; iter < 60 && hi - lo > 1e-10 * std::max(1.0, lo); ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (copula_h(m, mid, v) < w) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        default:
            return w;
    }
}

// i.i.d. pairs with the family's copula. Gaussian goes through correlated
// normals; the Archimedean families use their Marshall-Olkin frailties
// (Gamma for Clayton, positive stable for Gumbel, Sibuya for Joe).
inline void copula_pair_sample(const CopulaModel& m, std::size_t n, Rng& rng,
                               std::vector<double>& u1, std::vector<double>& u2) {
    m.validate();
    u1.resize(n);
    u2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m.is_independence()) {
            u1[i] = rng.uniform01();
            u2[i] = rng.uniform01();
            continue;
        }
        switch (m.family) {
            case CopulaModel::Family::Gaussian: {
                const double z1 = rng.normal();
                const double z2 = m.theta * z1 + std::sqrt(1.0 - m.theta * m.theta) * rng.normal();
                u1[i] = math::norm_cdf(z1);
                u2[i] = math::norm_cdf(z2);
                break;
            }
            case CopulaModel::Family::Clayton: {
                const double frailty = rng.gamma(1.0 / m.theta);
                u1[i] = std::pow(1.0 + rng.exponential() / frailty, -1.0 / m.theta);
                u2[i] = std::pow(1.0 + rng.exponential() / frailty, -1.0 / m.theta);
                break;
            }
            case CopulaModel::Family::Gumbel: {
                const double alpha = 1.0 / m.theta;
                const double frailty = cop_detail::positive_stable(alpha, rng);
                u1[i] = std::exp(-std::pow(rng.exponential() / frailty, alpha));
                u2[i] = std::exp(-std::pow(rng.exponential() / frailty, alpha));
                break;
            }
            case CopulaModel::Family::Joe: {
                const double alpha = 1.0 / m.theta;
                const double frailty = cop_detail::sibuya(alpha, rng);
                auto draw = [&]() {
                    const double e = rng.exponential();
                    return 1.0 - std::pow(-std::expm1(-e / frailty), alpha);
                };
                u1[i] = draw();
                u2[i] = draw();
                break;
            }
            default:
                u1[i] = rng.uniform01();
                u2[i] = rng.uniform01();
        }
        u1[i] = cop_detail::clamp_unit(u1[i]);
        u2[i] = cop_detail::clamp_unit(u2[i]);
    }
}

inline CopulaModel CopulaModel::parse(const std::string& text) {
    std::string name = text;
    std::string args;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        const auto close = text.rfind(')');
        if (close == std::string::npos || close < open) {
            throw ConfigError("cannot parse copula spec '" + text + "'");
        }
        name = text.substr(0, open);
        args = text.substr(open + 1, close - open - 1);
    }
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == "ind" || name == "independence") return independence();
    double theta = 0.0;
    try {
        theta = std::stod(args);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse copula parameter in '" + text + "'");
    }
    if (name == "ga" || name == "gaussian") return gaussian(theta);
    if (name == "cl" || name == "clayton") return clayton(theta);
    if (name == "gu" || name == "gumbel") return gumbel(theta);
    if (name == "joe") return joe(theta);
    throw ConfigError("unknown copula family in '" + text + "'");
}

} // namespace mixedindep
