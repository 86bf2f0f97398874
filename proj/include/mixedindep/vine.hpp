#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mixedindep/copulas.hpp"
#include "mixedindep/errors.hpp"
#include "mixedindep/rng.hpp"

namespace mixedindep {

// Edge of tree k: conditioned pair {a,b} given the conditioning set `cond`
// (|cond| = k), linked by `copula`.
struct VineEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::size_t> cond;
    CopulaModel copula;

    std::uint64_t var_mask() const {
        std::uint64_t m = (1ULL << a) | (1ULL << b);
        for (auto c : cond) m |= (1ULL << c);
        return m;
    }
    std::uint64_t cond_mask() const {
        std::uint64_t m = 0;
        for (auto c : cond) m |= (1ULL << c);
        return m;
    }
};

// Regular-vine tree sequence on d variables (0-based ids). trees[k] holds the
// edges of tree k+1 in the usual counting, i.e. conditioning sets of size k.
struct VineSpec {
    std::size_t dim = 0;
    std::vector<std::vector<VineEdge>> trees;

    static VineSpec independence(std::size_t d) {
        return dvine(d, [](std::size_t, std::size_t, std::size_t) {
            return CopulaModel::independence();
        });
    }

    static VineSpec single_pair(const CopulaModel& copula) {
        VineSpec v;
        v.dim = 2;
        v.trees.resize(1);
        v.trees[0].push_back(VineEdge{0, 1, {}, copula});
        return v;
    }

    // D-vine on the path 0-1-...-d-1; `pick(tree, a, b)` selects the copula of
    // the edge with conditioned pair (a, b) in the given tree (0-based).
    template <typename Pick>
    static VineSpec dvine(std::size_t d, Pick&& pick) {
        if (d < 2) throw DimensionError("VineSpec: need dimension >= 2");
        if (d > 62) throw DimensionError("VineSpec: dimension too large");
        VineSpec v;
        v.dim = d;
        v.trees.resize(d - 1);
        for (std::size_t k = 0; k < d - 1; ++k) {
            for (std::size_t i = 0; i + k + 1 < d; ++i) {
                VineEdge e;
                e.a = i;
                e.b = i + k + 1;
                for (std::size_t c = i + 1; c < i + k + 1; ++c) e.cond.push_back(c);
                e.copula = pick(k, e.a, e.b);
                v.trees[k].push_back(e);
            }
        }
        return v;
    }

    void validate() const {
        if (dim < 2) throw DimensionError("VineSpec: need dimension >= 2");
        if (trees.size() != dim - 1) {
            throw InvariantError("VineSpec: expected " + std::to_string(dim - 1) + " trees");
        }
        for (std::size_t k = 0; k < trees.size(); ++k) {
            if (trees[k].size() != dim - 1 - k) {
                throw InvariantError("VineSpec: tree " + std::to_string(k + 1) + " must have " +
                                     std::to_string(dim - 1 - k) + " edges");
            }
            for (const auto& e : trees[k]) {
                if (e.a >= dim || e.b >= dim || e.a == e.b) {
                    throw InvariantError("VineSpec: edge references an invalid variable");
                }
                if (e.cond.size() != k) {
                    throw InvariantError("VineSpec: tree " + std::to_string(k + 1) +
                                         " edge must condition on " + std::to_string(k) +
                                         " variables");
                }
                const auto vm = e.var_mask();
                if (std::popcount(vm) != static_cast<int>(k + 2)) {
                    throw InvariantError("VineSpec: edge variables must be distinct");
                }
                e.copula.validate();
                if (k > 0) {
                    // Proximity: both conditioned variables must extend an edge
                    // of the previous tree over exactly {v} + conditioning set.
                    find_parent(e.a, (1ULL << e.a) | e.cond_mask(), k);
                    find_parent(e.b, (1ULL << e.b) | e.cond_mask(), k);
                }
            }
        }
        // The peeling pass below throws on structures that are not a valid
        // regular vine even though the counts look right.
        sampling_order();
    }

    // Parent lookup: the edge of tree `k-1` whose variable set equals `vars`
    // (= {v} + conditioning set) and that has `v` as a conditioned member.
    const VineEdge& find_parent(std::size_t v, std::uint64_t vars, std::size_t k) const {
        for (const auto& f : trees[k - 1]) {
            if ((f.a == v || f.b == v) && f.var_mask() == vars) return f;
        }
        throw InvariantError("VineSpec: proximity condition violated at tree " +
                             std::to_string(k + 1));
    }

    struct SamplingPlan {
        std::vector<std::size_t> order;                    // variable per position
        std::vector<std::vector<const VineEdge*>> chains;  // per position, edges by tree level
    };

    // Peels conditioned variables off the top tree to get a simulation order;
    // chains[p][j] is the tree-j edge that connects order[p] to the variables
    // sampled before it.
    SamplingPlan sampling_order() const {
        std::vector<std::vector<bool>> alive(trees.size());
        for (std::size_t k = 0; k < trees.size(); ++k) alive[k].assign(trees[k].size(), true);

        SamplingPlan plan;
        plan.order.assign(dim, 0);
        plan.chains.assign(dim, {});
        std::vector<bool> peeled(dim, false);

        for (std::size_t pos = dim; pos-- > 1;) {
            const std::size_t top = pos - 1;  // highest tree with alive edges
            std::size_t top_alive = 0;
            const VineEdge* top_edge = nullptr;
            for (std::size_t e = 0; e < trees[top].size(); ++e) {
                if (alive[top][e]) {
                    ++top_alive;
                    top_edge = &trees[top][e];
                }
            }
            if (top_alive != 1 || top_edge == nullptr) {
                throw InvariantError("VineSpec: not a regular vine (tree " +
                                     std::to_string(top + 1) + " does not peel)");
            }
            const std::size_t v = top_edge->b;
            plan.order[pos] = v;
            peeled[v] = true;
            auto& chain = plan.chains[pos];
            chain.assign(pos, nullptr);
            for (std::size_t k = 0; k <= top; ++k) {
                const VineEdge* found = nullptr;
                for (std::size_t e = 0; e < trees[k].size(); ++e) {
                    if (!alive[k][e]) continue;
                    const auto& edge = trees[k][e];
                    if (edge.a == v || edge.b == v) {
                        if (found != nullptr) {
                            throw InvariantError(
                                "VineSpec: not a regular vine (ambiguous peel at tree " +
                                std::to_string(k + 1) + ")");
                        }
                        found = &edge;
                        alive[k][e] = false;
                    }
                }
                if (found == nullptr) {
                    throw InvariantError("VineSpec: not a regular vine (variable " +
                                         std::to_string(v) + " missing from tree " +
                                         std::to_string(k + 1) + ")");
                }
                chain[k] = found;
            }
        }
        for (std::size_t v = 0; v < dim; ++v) {
            if (!peeled[v]) plan.order[0] = v;
        }
        return plan;
    }
};

namespace vine_detail {

// Conditional CDF values F(v | conditioning set) for one row of uniforms,
// resolved recursively through the vine and memoized per row.
class RowConditionals {
public:
    RowConditionals(const VineSpec& spec, const std::vector<double>& u)
        : spec_(spec), u_(u) {}

    double cond_cdf(std::size_t v, std::uint64_t cond_mask) {
        if (cond_mask == 0) return u_[v];
        const auto key = std::make_pair(v, cond_mask);
        if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
        const std::size_t k = static_cast<std::size_t>(std::popcount(cond_mask));
        const VineEdge& f = spec_.find_parent(v, cond_mask | (1ULL << v), k);
        const std::size_t partner = (f.a == v) ? f.b : f.a;
        const std::uint64_t sub = f.cond_mask();
        const double num = cond_cdf(v, sub);
        const double den = cond_cdf(partner, sub);
        const double val = copula_h(f.copula, num, den);
        memo_.emplace(key, val);
        return val;
    }

private:
    const VineSpec& spec_;
    const std::vector<double>& u_;
    std::map<std::pair<std::size_t, std::uint64_t>, double> memo_;
};

} // namespace vine_detail

// One row of d dependent uniforms by the inverse Rosenblatt transform along
// the sampling plan.
inline std::vector<double> vine_sample_row(const VineSpec& spec,
                                           const VineSpec::SamplingPlan& plan, Rng& rng) {
    const std::size_t d = spec.dim;
    std::vector<double> w(d);
    for (auto& wi : w) wi = rng.uniform01();

    std::vector<double> u(d, 0.0);
    u[plan.order[0]] = w[0];
    vine_detail::RowConditionals cache(spec, u);
    for (std::size_t pos = 1; pos < d; ++pos) {
        const std::size_t v = plan.order[pos];
        double z = w[pos];
        for (std::size_t j = plan.chains[pos].size(); j-- > 0;) {
            const VineEdge* e = plan.chains[pos][j];
            const std::size_t partner = (e->a == v) ? e->b : e->a;
            const double cond = cache.cond_cdf(partner, e->cond_mask());
            z = copula_hinv(e->copula, z, cond);
        }
        u[v] = cop_detail::clamp_unit(z);
    }
    return u;
}

// n x d matrix of dependent uniforms (row-major).
inline std::vector<double> vine_sample(const VineSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    const auto plan = spec.sampling_order();
    std::vector<double> out(n * spec.dim);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = vine_sample_row(spec, plan, rng);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(i * spec.dim));
    }
    return out;
}

// Default dependence designs: a D-vine path with same-type variables adjacent
// (X block first). theta1 drives same-type tree-1 edges, theta2 the cross-type
// edge and every deeper tree, theta3 (when given) overrides trees >= 3.
struct DVineDesign {
    CopulaModel::Family family = CopulaModel::Family::Independence;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;
    bool has_theta3 = false;

    static CopulaModel edge_model(CopulaModel::Family family, double theta) {
        if (family == CopulaModel::Family::Independence || theta == 0.0) {
            return CopulaModel::independence();
        }
        return CopulaModel::make(family, theta);
    }

    VineSpec build(std::size_t r1, std::size_t r2) const {
        const std::size_t d = r1 + r2;
        return VineSpec::dvine(d, [&](std::size_t tree, std::size_t a, std::size_t b) {
            if (tree == 0) {
                const bool same_type = (b < r1) || (a >= r1);
                return edge_model(family, same_type ? theta1 : theta2);
            }
            if (tree >= 2 && has_theta3) return edge_model(family, theta3);
            return edge_model(family, theta2);
        });
    }
};

} // namespace mixedindep
