// mixedindep: independence tests for mixed continuous/count data.
//
// Subcommands:
//   test       run statistics on a CSV file (permutation or asymptotic p-values)
//   power      warp-speed Monte-Carlo rejection-rate study from a config file
//   quantiles  Monte-Carlo null quantiles of the standardized statistic
//
// Exit codes: 0 success, 2 malformed input/config, 3 data invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mixedindep/config.hpp"
#include "mixedindep/csv.hpp"
#include "mixedindep/inference.hpp"
#include "mixedindep/report.hpp"

namespace {

using namespace mixedindep;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split_list(text)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse " + what + " value '" + tok + "'");
        }
    }
    return out;
}

WeightParams resolve_weights(const std::string& a_text, const std::string& b_text, Mode mode,
                             std::size_t r1, std::size_t r2) {
    WeightParams wp = default_weights(mode, r1, r2);
    if (!a_text.empty()) {
        auto a = parse_reals(a_text, "--a");
        if (a.size() == 1) a.assign(r1, a[0]);
        if (a.size() != r1) throw ConfigError("--a needs 1 or r1 values");
        wp.a = a;
    }
    if (!b_text.empty()) {
        auto b = parse_reals(b_text, "--b");
        if (b.size() == 1) b.assign(r2, b[0]);
        if (b.size() != r2) throw ConfigError("--b needs 1 or r2 values");
        wp.b = b;
    }
    for (double v : wp.a) {
        if (!(v > 0.0)) throw ConfigError("--a values must be positive");
    }
    for (double v : wp.b) {
        if (!(v > 0.0)) throw ConfigError("--b values must be positive");
    }
    return wp;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << content;
}

struct TestOptions {
    std::string input;
    std::string x_cols, y_cols;
    std::string stats = "i,t,sti,d";
    std::string mode_text = "two-vector";
    std::string a_text, b_text;
    double sigma = 0.5;
    std::size_t d_grid = kDStatDefaultNodes;
    std::size_t perms = 999;
    std::uint64_t seed = 17;
    double alpha = 0.05;
    bool json = false;
    bool asymptotic = false;
};

int run_test(const TestOptions& opt) {
    const auto table = CsvTable::read_file(opt.input);
    const auto sample = build_sample(table, split_list(opt.x_cols), split_list(opt.y_cols));
    const Mode mode = config_detail::parse_mode(opt.mode_text);
    const auto wp = resolve_weights(opt.a_text, opt.b_text, mode, sample.r1(), sample.r2());
    if (opt.perms < 1) throw ConfigError("--perms must be at least 1");

    std::vector<TestOutcome> outcomes;
    std::uint64_t stat_index = 0;
    for (const auto& name : split_list(opt.stats)) {
        StatisticSpec spec =
            config_detail::parse_statistic(name, mode, sample.r1(), sample.r2(), opt.d_grid);
        if (spec.family != StatFamily::D) spec.wp = wp;
        if (spec.family == StatFamily::D) spec.d_sigma = opt.sigma;

        TestOutcome outcome;
        outcome.spec = spec;
        outcome.n = sample.n();
        outcome.value = evaluate_statistic(sample, spec);
        outcome.reported_value = (spec.family == StatFamily::T && outcome.value < 0.0)
                                     ? 0.0
                                     : outcome.value;
        // Asymptotic p-values are offered for st.I only, once the normal
        // approximation is trustworthy (n >= 500).
        if (spec.family == StatFamily::StI && opt.asymptotic && sample.n() >= 500) {
            outcome.method = "asymptotic";
            outcome.p_value = asymptotic_pvalue(outcome.value);
        } else {
            if (spec.family == StatFamily::StI && opt.asymptotic) {
                std::cerr << "note: --asymptotic ignored for n < 500; using permutation\n";
            }
            outcome.method = "permutation";
            outcome.replications = opt.perms;
            outcome.seed = opt.seed;
            outcome.p_value =
                permutation_pvalue(sample, spec, opt.perms, opt.seed + stat_index);
        }
        outcomes.push_back(outcome);
        ++stat_index;
    }

    if (opt.json) {
        ordered_json root;
        root["command"] = "test";
        root["input"] = opt.input;
        root["n"] = sample.n();
        root["alpha"] = opt.alpha;
        ordered_json arr = ordered_json::array();
        for (const auto& o : outcomes) arr.push_back(to_json(o));
        root["results"] = std::move(arr);
        std::cout << root.dump(2) << "\n";
    } else {
        std::cout << render_outcomes_text(outcomes);
    }
    return 0;
}

struct FileOptions {
    std::string config;
    std::string out_prefix;
    bool json = false;
};

int run_power(const FileOptions& opt) {
    const auto cfg = load_study_config(opt.config);
    if (cfg.statistics.empty()) {
        throw ConfigError("[study] statistics must list at least one statistic for power runs");
    }
    PowerReport report;
    report.config = cfg;
    report.sizes = cfg.sizes;
    for (auto n : cfg.sizes) {
        const auto result = warp_speed_power(cfg.simulation(n));
        std::vector<double> row;
        row.reserve(result.cells.size());
        for (const auto& cell : result.cells) row.push_back(cell.rejection_rate_pct);
        report.rates.push_back(std::move(row));
    }
    const std::string text = render_power_text(report);
    const std::string json = to_json(report).dump(2) + "\n";
    if (!opt.out_prefix.empty()) {
        write_file(opt.out_prefix + ".json", json);
        write_file(opt.out_prefix + ".txt", text);
    }
    std::cout << (opt.json ? json : text);
    return 0;
}

int run_quantiles(const FileOptions& opt) {
    const auto root = read_config_file(opt.config);
    const auto cfg = parse_study_config(root);

    WeightParams wp = default_weights(cfg.mode, cfg.r1, cfg.r2);
    const auto& study = root.at("study");
    auto read_vec = [&](const char* key, std::vector<double>& target, std::size_t dim) {
        if (!study.contains(key)) return;
        std::vector<double> vals;
        if (study.at(key).is_array()) {
            for (const auto& e : study.at(key)) vals.push_back(e.get<double>());
        } else {
            vals.push_back(study.at(key).get<double>());
        }
        if (vals.size() == 1) vals.assign(dim, vals[0]);
        if (vals.size() != dim) {
            throw ConfigError(std::string("[study] ") + key + " needs 1 or block-size values");
        }
        target = vals;
    };
    read_vec("a", wp.a, cfg.r1);
    read_vec("b", wp.b, cfg.r2);

    QuantileReport report;
    report.config = cfg;
    report.wp = wp;
    report.sizes = cfg.sizes;
    for (std::size_t ni = 0; ni < cfg.sizes.size(); ++ni) {
        report.quantiles.push_back(mc_null_quantiles(cfg.marginals, wp, cfg.sizes[ni],
                                                     cfg.replicates, cfg.levels,
                                                     cfg.seed + ni));
    }
    const std::string text = render_quantiles_text(report);
    const std::string json = to_json(report).dump(2) + "\n";
    if (!opt.out_prefix.empty()) {
        write_file(opt.out_prefix + ".json", json);
        write_file(opt.out_prefix + ".txt", text);
    }
    std::cout << (opt.json ? json : text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Independence tests for mixed continuous/count data"};
    app.require_subcommand(1);

    TestOptions topt;
    auto* test = app.add_subcommand("test", "Run independence tests on a CSV file");
    test->add_option("--input", topt.input, "CSV file (header row, comma separated)")
        ->required();
    test->add_option("--x", topt.x_cols, "continuous columns (names or 0-based indices)")
        ->required();
    test->add_option("--y", topt.y_cols, "count columns (names or 0-based indices)")
        ->required();
    test->add_option("--stat", topt.stats, "statistics to run (default i,t,sti,d)");
    test->add_option("--mode", topt.mode_text, "two-vector or total (default two-vector)");
    test->add_option("--a", topt.a_text, "weight parameters a (single value broadcasts)");
    test->add_option("--b", topt.b_text, "weight parameters b (single value broadcasts)");
    test->add_option("--sigma", topt.sigma, "Gaussian weight scale of the D statistic");
    test->add_option("--d-grid", topt.d_grid, "quadrature nodes per axis for D (default 32)");
    test->add_option("--perms", topt.perms, "permutation replicates B (default 999)");
    test->add_option("--seed", topt.seed, "RNG seed (default 17)");
    test->add_option("--alpha", topt.alpha, "significance level (default 0.05)");
    test->add_flag("--json", topt.json, "emit JSON instead of a table");
    test->add_flag("--asymptotic", topt.asymptotic,
                   "use the normal approximation for st.I when n >= 500");

    FileOptions popt;
    auto* power = app.add_subcommand("power", "Warp-speed rejection-rate study");
    power->add_option("--config", popt.config, "TOML or JSON study configuration")->required();
    power->add_option("--out", popt.out_prefix, "write PREFIX.json and PREFIX.txt");
    power->add_flag("--json", popt.json, "print JSON instead of the text table");

    FileOptions qopt;
    auto* quant = app.add_subcommand("quantiles", "Monte-Carlo null quantiles of st.I");
    quant->add_option("--config", qopt.config, "TOML or JSON study configuration")->required();
    quant->add_option("--out", qopt.out_prefix, "write PREFIX.json and PREFIX.txt");
    quant->add_flag("--json", qopt.json, "print JSON instead of the text table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (test->parsed()) return run_test(topt);
        if (power->parsed()) return run_power(popt);
        if (quant->parsed()) return run_quantiles(qopt);
    } catch (const InvariantError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
