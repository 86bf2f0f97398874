#pragma once

#include <algorithm>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mixedindep/config.hpp"
#include "mixedindep/inference.hpp"

namespace mixedindep {

using ordered_json = nlohmann::ordered_json;

// Outcome of one statistic on one data set.
struct TestOutcome {
    StatisticSpec spec;
    double value = 0.0;           // raw statistic
    double reported_value = 0.0;  // T clamped at zero for display
    double p_value = 1.0;
    std::string method;           // "permutation" or "asymptotic"
    std::size_t replications = 0; // B for permutation, 0 for asymptotic
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

inline ordered_json to_json(const TestOutcome& o) {
    ordered_json j;
    j["statistic"] = o.spec.label();
    j["family"] = to_string(o.spec.family);
    j["mode"] = to_string(o.spec.mode);
    if (o.spec.family == StatFamily::D) {
        j["sigma"] = o.spec.d_sigma;
        j["grid"] = o.spec.d_nodes;
    } else {
        j["a"] = o.spec.wp.a;
        j["b"] = o.spec.wp.b;
    }
    j["n"] = o.n;
    j["value"] = o.reported_value;
    j["raw_value"] = o.value;
    j["p_value"] = o.p_value;
    j["method"] = o.method;
    if (o.replications > 0) j["permutations"] = o.replications;
    j["seed"] = o.seed;
    return j;
}

inline std::string render_outcomes_text(const std::vector<TestOutcome>& outcomes) {
    std::ostringstream out;
    out << std::left << std::setw(14) << "statistic" << std::setw(12) << "mode"
        << std::setw(16) << "value" << std::setw(12) << "p-value"
        << "method\n";
    for (const auto& o : outcomes) {
        std::ostringstream val, p;
        val << std::setprecision(6) << std::scientific << o.reported_value;
        p << std::setprecision(4) << std::fixed << o.p_value;
        out << std::left << std::setw(14) << o.spec.label() << std::setw(12)
            << to_string(o.spec.mode) << std::setw(16) << val.str() << std::setw(12) << p.str()
            << o.method << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Power study reports.
// ---------------------------------------------------------------------------

struct PowerReport {
    StudyConfig config;
    std::vector<std::size_t> sizes;
    // rates[size_index][statistic_index]
    std::vector<std::vector<double>> rates;
};

inline ordered_json to_json(const PowerReport& r) {
    ordered_json records = ordered_json::array();
    for (std::size_t ni = 0; ni < r.sizes.size(); ++ni) {
        for (std::size_t s = 0; s < r.config.statistics.size(); ++s) {
            const auto& spec = r.config.statistics[s];
            ordered_json j;
            j["statistic"] = spec.label();
            j["mode"] = to_string(spec.mode);
            if (spec.family == StatFamily::D) {
                j["a"] = nullptr;
                j["b"] = nullptr;
                j["sigma"] = spec.d_sigma;
            } else {
                j["a"] = spec.wp.a;
                j["b"] = spec.wp.b;
            }
            j["design"] = r.config.design_label;
            j["n"] = r.sizes[ni];
            j["N"] = r.config.replicates;
            j["alpha"] = r.config.alpha;
            j["rejection_rate_pct"] = r.rates[ni][s];
            records.push_back(std::move(j));
        }
    }
    ordered_json root;
    root["command"] = "power";
    root["design"] = r.config.design_label;
    root["seed"] = r.config.seed;
    root["cells"] = std::move(records);
    return root;
}

inline std::string render_power_text(const PowerReport& r) {
    std::ostringstream out;
    out << "design: " << r.config.design_label << "   N=" << r.config.replicates
        << "   alpha=" << r.config.alpha << "   seed=" << r.config.seed << "\n";
    out << std::left << std::setw(14) << "statistic" << std::setw(12) << "mode";
    for (auto n : r.sizes) out << std::right << std::setw(10) << ("n=" + std::to_string(n));
    out << "\n";
    for (std::size_t s = 0; s < r.config.statistics.size(); ++s) {
        const auto& spec = r.config.statistics[s];
        out << std::left << std::setw(14) << spec.label() << std::setw(12)
            << to_string(spec.mode);
        for (std::size_t ni = 0; ni < r.sizes.size(); ++ni) {
            out << std::right << std::setw(10) << std::fixed << std::setprecision(1)
                << r.rates[ni][s];
        }
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Null-quantile reports (one weight setting, several sample sizes).
// ---------------------------------------------------------------------------

struct QuantileReport {
    StudyConfig config;
    WeightParams wp;
    std::vector<std::size_t> sizes;
    // quantiles[size_index][level_index]
    std::vector<std::vector<double>> quantiles;
};

inline ordered_json to_json(const QuantileReport& r) {
    ordered_json root;
    root["command"] = "quantiles";
    root["design"] = r.config.design_label;
    root["a"] = r.wp.a;
    root["b"] = r.wp.b;
    root["N"] = r.config.replicates;
    root["seed"] = r.config.seed;
    root["levels"] = r.config.levels;
    ordered_json rows = ordered_json::array();
    for (std::size_t ni = 0; ni < r.sizes.size(); ++ni) {
        ordered_json j;
        j["n"] = r.sizes[ni];
        j["quantiles"] = r.quantiles[ni];
        rows.push_back(std::move(j));
    }
    root["rows"] = std::move(rows);
    ordered_json limits = ordered_json::array();
    for (double level : r.config.levels) {
        limits.push_back(math::norm_quantile(0.5 + level / 2.0));
    }
    root["normal_limit"] = std::move(limits);
    return root;
}

inline std::string render_quantiles_text(const QuantileReport& r) {
    std::ostringstream out;
    out << "design: " << r.config.design_label << "   N=" << r.config.replicates
        << "   seed=" << r.config.seed << "\n";
    out << std::left << std::setw(10) << "level";
    for (auto n : r.sizes) out << std::right << std::setw(9) << ("n=" + std::to_string(n));
    out << std::right << std::setw(9) << "limit" << "\n";
    for (std::size_t li = 0; li < r.config.levels.size(); ++li) {
        out << std::left << std::setw(10) << std::setprecision(3) << std::fixed
            << r.config.levels[li];
        for (std::size_t ni = 0; ni < r.sizes.size(); ++ni) {
            out << std::right << std::setw(9) << std::setprecision(2) << std::fixed
                << r.quantiles[ni][li];
        }
        out << std::right << std::setw(9) << std::setprecision(2) << std::fixed
            << math::norm_quantile(0.5 + r.config.levels[li] / 2.0) << "\n";
    }
    return out.str();
}

} // namespace mixedindep
