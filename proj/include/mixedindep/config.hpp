#pragma once

#include <cctype>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mixedindep/errors.hpp"
#include "mixedindep/inference.hpp"

namespace mixedindep {

namespace config_detail {

inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline nlohmann::json parse_scalar(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw ConfigError("empty value in config");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') throw ConfigError("unterminated string: " + t);
        return t.substr(1, t.size() - 2);
    }
    if (t == "true") return true;
    if (t == "false") return false;
    try {
        std::size_t used = 0;
        if (t.find_first_of(".eE") != std::string::npos) {
            const double v = std::stod(t, &used);
            if (used == t.size()) return v;
        } else {
            const long long v = std::stoll(t, &used);
            if (used == t.size()) return v;
        }
    } catch (const std::exception&) {
        // fall through
    }
    throw ConfigError("cannot parse config value '" + t + "'");
}

inline std::vector<std::string> split_top_level(const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    bool in_string = false;
    for (char c : body) {
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(cur);
    return out;
}

} // namespace config_detail

// Reads a configuration file into {section: {key: value}} json. Accepts plain
// JSON, or a TOML subset: [section] headers, key = value lines with string,
// number, boolean, or flat array values, and # comments.
inline nlohmann::json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("JSON config parse error: ") + e.what());
        }
    }

    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* section = &root;
    std::istringstream lines(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(lines, raw)) {
        ++lineno;
        const std::string line = config_detail::trim(config_detail::strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.size() < 3 || line.back() != ']' || line[1] == '[') {
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unsupported section syntax '" + line + "'");
            }
            const std::string name = config_detail::trim(line.substr(1, line.size() - 2));
            root[name] = root.contains(name) ? root[name] : nlohmann::json::object();
            section = &root[name];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string value = config_detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') {
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": arrays must close on the same line");
            }
            nlohmann::json arr = nlohmann::json::array();
            const std::string body = value.substr(1, value.size() - 2);
            if (!config_detail::trim(body).empty()) {
                for (const auto& tok : config_detail::split_top_level(body)) {
                    arr.push_back(config_detail::parse_scalar(tok));
                }
            }
            (*section)[key] = arr;
        } else {
            (*section)[key] = config_detail::parse_scalar(value);
        }
    }
    return root;
}

// ---------------------------------------------------------------------------
// Typed study configuration assembled from the [marginals], [vine], [study]
// sections.
// ---------------------------------------------------------------------------

struct StudyConfig {
    std::vector<MarginalSpec> marginals;  // X block first
    VineSpec vine;
    Mode mode = Mode::two_vector;
    std::vector<std::size_t> sizes;       // sample sizes n
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::vector<StatisticSpec> statistics;
    std::vector<double> levels{0.95, 0.99};
    std::size_t d_nodes = 16;
    std::string design_label;
    std::size_t r1 = 0, r2 = 0;

    SimulationConfig simulation(std::size_t n) const {
        SimulationConfig sim;
        sim.marginals = marginals;
        sim.vine = vine;
        sim.n = n;
        sim.replicates = replicates;
        sim.seed = seed;
        sim.alpha = alpha;
        sim.statistics = statistics;
        sim.design_label = design_label;
        return sim;
    }
};

namespace config_detail {

inline Mode parse_mode(std::string text) {
    for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (text == "two_vector" || text == "two-vector" || text == "twovector") {
        return Mode::two_vector;
    }
    if (text == "total") return Mode::total;
    throw ConfigError("unknown mode '" + text + "' (expected two-vector or total)");
}

// "t(0.2,0.5)", "i(1,5)", "sti(1,5)", "d(0.5)"; bare names take defaults.
inline StatisticSpec parse_statistic(const std::string& text, Mode mode, std::size_t r1,
                                     std::size_t r2, std::size_t d_nodes) {
    std::string name = text;
    std::vector<double> args;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        const auto close = text.rfind(')');
        if (close == std::string::npos || close < open) {
            throw ConfigError("cannot parse statistic spec '" + text + "'");
        }
        name = text.substr(0, open);
        std::string body = text.substr(open + 1, close - open - 1);
        for (const auto& tok : split_top_level(body)) {
            if (trim(tok).empty()) continue;
            try {
                args.push_back(std::stod(trim(tok)));
            } catch (const std::exception&) {
                throw ConfigError("cannot parse statistic parameters in '" + text + "'");
            }
        }
    }
    for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    StatisticSpec spec;
    spec.mode = mode;
    spec.d_nodes = d_nodes;
    if (name == "d") {
        spec.family = StatFamily::D;
        spec.d_sigma = args.empty() ? 0.5 : args[0];
        if (!(spec.d_sigma > 0.0)) throw ConfigError("d statistic needs sigma > 0");
        return spec;
    }
    if (name == "i") {
        spec.family = StatFamily::I;
    } else if (name == "t") {
        spec.family = StatFamily::T;
    } else if (name == "sti" || name == "st.i") {
        spec.family = StatFamily::StI;
    } else {
        throw ConfigError("unknown statistic '" + text + "' (expected i, t, sti or d)");
    }
    if (args.empty()) {
        spec.wp = default_weights(mode, r1, r2);
    } else if (args.size() == 2) {
        spec.wp = WeightParams::scalar(args[0], args[1], r1, r2);
    } else {
        throw ConfigError("statistic '" + text + "' expects (a,b) or no parameters");
    }
    return spec;
}

inline VineSpec parse_vine(const nlohmann::json& v, std::size_t r1, std::size_t r2) {
    const std::size_t d = r1 + r2;
    if (v.contains("edges")) {
        VineSpec spec;
        spec.dim = d;
        spec.trees.resize(d - 1);
        for (const auto& entry : v.at("edges")) {
            const std::string text = entry.get<std::string>();
            // "a,b|c,d:Family(theta)" with 1-based variable ids
            const auto colon = text.rfind(':');
            if (colon == std::string::npos) {
                throw ConfigError("vine edge '" + text + "' is missing the copula part");
            }
            const std::string varpart = text.substr(0, colon);
            const auto bar = varpart.find('|');
            const std::string condpart =
                bar == std::string::npos ? "" : varpart.substr(bar + 1);
            const std::string pairpart =
                bar == std::string::npos ? varpart : varpart.substr(0, bar);
            auto parse_ids = [&](const std::string& s) {
                std::vector<std::size_t> ids;
                for (const auto& tok : split_top_level(s)) {
                    const std::string tt = trim(tok);
                    if (tt.empty()) continue;
                    const long id = std::stol(tt);
                    if (id < 1 || static_cast<std::size_t>(id) > d) {
                        throw ConfigError("vine edge '" + text + "' references variable " + tt +
                                          " outside 1.." + std::to_string(d));
                    }
                    ids.push_back(static_cast<std::size_t>(id - 1));
                }
                return ids;
            };
            const auto pair = parse_ids(pairpart);
            if (pair.size() != 2) {
                throw ConfigError("vine edge '" + text + "' needs a conditioned pair");
            }
            VineEdge edge;
            edge.a = pair[0];
            edge.b = pair[1];
            edge.cond = parse_ids(condpart);
            edge.copula = CopulaModel::parse(trim(text.substr(colon + 1)));
            const std::size_t k = edge.cond.size();
            if (k >= spec.trees.size() + 1) {
                throw ConfigError("vine edge '" + text + "' conditions on too many variables");
            }
            spec.trees[k].push_back(edge);
        }
        spec.validate();
        return spec;
    }

    DVineDesign design;
    std::string family = v.value("family", std::string("independence"));
    for (auto& c : family) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (family == "ind" || family == "independence") {
        design.family = CopulaModel::Family::Independence;
    } else if (family == "ga" || family == "gaussian") {
        design.family = CopulaModel::Family::Gaussian;
    } else if (family == "cl" || family == "clayton") {
        design.family = CopulaModel::Family::Clayton;
    } else if (family == "gu" || family == "gumbel") {
        design.family = CopulaModel::Family::Gumbel;
    } else if (family == "joe") {
        design.family = CopulaModel::Family::Joe;
    } else {
        throw ConfigError("unknown vine family '" + family + "'");
    }
    design.theta1 = v.value("theta1", 0.0);
    design.theta2 = v.value("theta2", v.value("theta", 0.0));
    if (v.contains("theta3")) {
        design.theta3 = v.at("theta3").get<double>();
        design.has_theta3 = true;
    }
    const std::string structure = v.value("structure", std::string("dvine"));
    if (structure != "dvine") {
        throw ConfigError("unknown vine structure '" + structure + "' (use dvine or edges)");
    }
    return design.build(r1, r2);
}

} // namespace config_detail

inline StudyConfig parse_study_config(const nlohmann::json& root) {
    StudyConfig cfg;
    if (!root.contains("marginals")) throw ConfigError("config is missing [marginals]");
    if (!root.contains("study")) throw ConfigError("config is missing [study]");
    const auto& marg = root.at("marginals");
    const auto& study = root.at("study");

    auto string_list = [](const nlohmann::json& j, const std::string& what) {
        std::vector<std::string> out;
        if (!j.is_array()) throw ConfigError(what + " must be an array of strings");
        for (const auto& e : j) out.push_back(e.get<std::string>());
        return out;
    };

    if (!marg.contains("x") || !marg.contains("y")) {
        throw ConfigError("[marginals] must define x = [...] and y = [...]");
    }
    for (const auto& text : string_list(marg.at("x"), "[marginals] x")) {
        const auto spec = MarginalSpec::parse(text);
        if (spec.is_count()) {
            throw ConfigError("marginal '" + text + "' is a count family but listed under x");
        }
        cfg.marginals.push_back(spec);
    }
    cfg.r1 = cfg.marginals.size();
    for (const auto& text : string_list(marg.at("y"), "[marginals] y")) {
        const auto spec = MarginalSpec::parse(text);
        if (!spec.is_count()) {
            throw ConfigError("marginal '" + text + "' is continuous but listed under y");
        }
        cfg.marginals.push_back(spec);
    }
    cfg.r2 = cfg.marginals.size() - cfg.r1;
    if (cfg.r1 == 0 || cfg.r2 == 0) {
        throw ConfigError("need at least one continuous and one count marginal");
    }

    cfg.mode = config_detail::parse_mode(study.value("mode", std::string("two_vector")));
    if (study.contains("n")) {
        if (study.at("n").is_array()) {
            for (const auto& e : study.at("n")) {
                cfg.sizes.push_back(e.get<std::size_t>());
            }
        } else {
            cfg.sizes.push_back(study.at("n").get<std::size_t>());
        }
    } else {
        cfg.sizes.push_back(50);
    }
    for (auto n : cfg.sizes) {
        if (n < 2) throw ConfigError("[study] n must be at least 2");
    }
    cfg.replicates = study.value("replicates", static_cast<std::size_t>(10000));
    cfg.seed = study.value("seed", static_cast<std::uint64_t>(1));
    cfg.alpha = study.value("alpha", 0.05);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("[study] alpha must lie in (0,1)");
    cfg.d_nodes = study.value("d_grid", static_cast<std::size_t>(16));
    if (study.contains("levels")) {
        cfg.levels.clear();
        for (const auto& e : study.at("levels")) cfg.levels.push_back(e.get<double>());
        for (double l : cfg.levels) {
            if (!(l > 0.0 && l < 1.0)) throw ConfigError("[study] levels must lie in (0,1)");
        }
    }

    const auto vine_json = root.contains("vine") ? root.at("vine") : nlohmann::json::object();
    cfg.vine = config_detail::parse_vine(vine_json, cfg.r1, cfg.r2);

    if (study.contains("statistics")) {
        for (const auto& text : string_list(study.at("statistics"), "[study] statistics")) {
            cfg.statistics.push_back(
                config_detail::parse_statistic(text, cfg.mode, cfg.r1, cfg.r2, cfg.d_nodes));
        }
    }

    std::string label = study.value("label", std::string());
    if (label.empty()) {
        for (std::size_t i = 0; i < cfg.marginals.size(); ++i) {
            if (i > 0) label += "x";
            label += cfg.marginals[i].label();
        }
        std::string vlabel;
        if (vine_json.contains("edges")) {
            vlabel = "custom";
        } else {
            const std::string fam = vine_json.value("family", std::string("independence"));
            vlabel = fam;
            if (vine_json.contains("theta2") || vine_json.contains("theta")) {
                vlabel += "(" + std::to_string(vine_json.value("theta2", vine_json.value("theta", 0.0))) + ")";
            }
        }
        label += " / " + vlabel;
    }
    cfg.design_label = label;
    return cfg;
}

inline StudyConfig load_study_config(const std::string& path) {
    return parse_study_config(read_config_file(path));
}

} // namespace mixedindep
