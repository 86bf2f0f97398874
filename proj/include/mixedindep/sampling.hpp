#pragma once

#include <cstdint>
#include <vector>

#include "mixedindep/distributions.hpp"
#include "mixedindep/errors.hpp"
#include "mixedindep/rng.hpp"
#include "mixedindep/sample.hpp"
#include "mixedindep/vine.hpp"

namespace mixedindep {

// Draws vine uniforms and pushes each column through its marginal quantile.
// Marginals are listed X block first; at least one of each type.
inline MixedSample generate_dataset(const std::vector<MarginalSpec>& marginals,
                                    const VineSpec& vine, std::size_t n, Rng& rng) {
    if (marginals.size() != vine.dim) {
        throw DimensionError("generate_dataset: marginal count must equal the vine dimension");
    }
    std::size_t r1 = 0;
    while (r1 < marginals.size() && !marginals[r1].is_count()) ++r1;
    const std::size_t r2 = marginals.size() - r1;
    if (r1 == 0 || r2 == 0) {
        throw DimensionError("generate_dataset: need at least one continuous and one count marginal");
    }
    for (std::size_t c = r1; c < marginals.size(); ++c) {
        if (!marginals[c].is_count()) {
            throw DimensionError("generate_dataset: continuous marginals must precede count marginals");
        }
    }

    vine.validate();
    const auto plan = vine.sampling_order();
    std::vector<double> x(n * r1);
    std::vector<std::int64_t> y(n * r2);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = vine_sample_row(vine, plan, rng);
        for (std::size_t j = 0; j < r1; ++j) x[i * r1 + j] = marginals[j].quantile(u[j]);
        for (std::size_t k = 0; k < r2; ++k) {
            y[i * r2 + k] = marginals[r1 + k].count_quantile(u[r1 + k]);
        }
    }
    return MixedSample(std::move(x), std::move(y), r1, r2);
}

} // namespace mixedindep
