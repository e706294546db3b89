#include "zwise/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "zwise/csvio.hpp"
#include "zwise/errors.hpp"

namespace zwise {

namespace {

using nlohmann::json;

// Rejects typos: every key present must be on the allowed list.
void expect_keys(const json& obj, const std::string& scope,
                 std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(scope + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw ConfigError(scope + ": unknown key \"" + it.key() + "\"");
        }
    }
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

void note(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    cfg.overrides.push_back(key + "=" + value);
}

std::string join_doubles(const double* v, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

void PipelineConfig::validate() const {
    if (!(kde_bandwidth > 0.0) || !std::isfinite(kde_bandwidth)) {
        throw ConfigError("kde.bandwidth must be positive");
    }
    if (kde_grid_points < 16) throw ConfigError("kde.grid_points must be >= 16");
    if (!(dx > 0.0) || dx > 0.2) throw ConfigError("fis.dx must lie in (0, 0.2]");
    double steps = 1.0 / dx;
    if (std::fabs(steps - std::round(steps)) > 1e-9) {
        throw ConfigError("fis.dx must divide 1 exactly");
    }
    if (!(default_rule_strength > 0.0) || default_rule_strength > 1.0) {
        throw ConfigError("fis.default_rule_strength must lie in (0,1]");
    }
    if (expected_responses < 1) throw ConfigError("expected_responses must be >= 1");
    if (stats.resamples < 1) throw ConfigError("stats.resamples must be >= 1");
    if (!(stats.level > 0.0) || !(stats.level < 1.0)) {
        throw ConfigError("stats.level must lie in (0,1)");
    }
    // Threshold arrays are validated at construction (strictly increasing in
    // (0,1)), so reaching here means they are structurally sound.
}

PipelineConfig load_config(const std::string& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    PipelineConfig cfg = std::move(base);
    expect_keys(doc, path,
                {"lexicons", "rules", "component_thresholds", "confidence_thresholds", "kde",
                 "fis", "stats", "expected_responses", "output_dir"});

    const std::initializer_list<std::string_view> kComponentKeys = {"PT", "Ref", "Pro", "REA",
                                                                    "IH"};

    if (doc.contains("lexicons")) {
        expect_keys(doc["lexicons"], path + ":lexicons", kComponentKeys);
        for (std::size_t c = 0; c < kComponents.size(); ++c) {
            std::string key{to_string(kComponents[c])};
            if (doc["lexicons"].contains(key)) {
                cfg.lexicon_paths[c] = doc["lexicons"][key].get<std::string>();
                note(cfg, "lexicons." + key, cfg.lexicon_paths[c]);
            }
        }
    }

    if (doc.contains("rules")) {
        cfg.rules_path = doc["rules"].get<std::string>();
        note(cfg, "rules", cfg.rules_path);
    }

    if (doc.contains("component_thresholds")) {
        expect_keys(doc["component_thresholds"], path + ":component_thresholds", kComponentKeys);
        for (std::size_t c = 0; c < kComponents.size(); ++c) {
            std::string key{to_string(kComponents[c])};
            if (!doc["component_thresholds"].contains(key)) continue;
            const json& arr = doc["component_thresholds"][key];
            if (!arr.is_array() || arr.size() != 6) {
                throw ConfigError(path + ": component_thresholds." + key +
                                  " must be an array of 6 numbers");
            }
            std::array<double, 6> t{};
            for (std::size_t i = 0; i < 6; ++i) {
                t[i] = get_number(arr[i], path + ": component_thresholds." + key);
            }
            cfg.component_thresholds[c] = ComponentThresholds(kComponents[c], t);
            note(cfg, "component_thresholds." + key, join_doubles(t.data(), 6));
        }
    }

    if (doc.contains("confidence_thresholds")) {
        const json& arr = doc["confidence_thresholds"];
        if (!arr.is_array() || arr.size() != 7) {
            throw ConfigError(path + ": confidence_thresholds must be an array of 7 numbers");
        }
        std::array<double, 7> t{};
        for (std::size_t i = 0; i < 7; ++i) {
            t[i] = get_number(arr[i], path + ": confidence_thresholds");
        }
        cfg.confidence_thresholds = ConfidenceThresholds::from_inner(t);
        note(cfg, "confidence_thresholds", join_doubles(t.data(), 7));
    }

    if (doc.contains("kde")) {
        const json& k = doc["kde"];
        expect_keys(k, path + ":kde", {"bandwidth", "grid_points"});
        if (k.contains("bandwidth")) {
            cfg.kde_bandwidth = get_number(k["bandwidth"], path + ": kde.bandwidth");
            note(cfg, "kde.bandwidth", format_double(cfg.kde_bandwidth));
        }
        if (k.contains("grid_points")) {
            cfg.kde_grid_points = k["grid_points"].get<std::size_t>();
            note(cfg, "kde.grid_points", std::to_string(cfg.kde_grid_points));
        }
    }

    if (doc.contains("fis")) {
        const json& f = doc["fis"];
        expect_keys(f, path + ":fis", {"dx", "strict", "default_rule_strength"});
        if (f.contains("dx")) {
            cfg.dx = get_number(f["dx"], path + ": fis.dx");
            note(cfg, "fis.dx", format_double(cfg.dx));
        }
        if (f.contains("strict")) {
            cfg.strict_mode = f["strict"].get<bool>();
            note(cfg, "fis.strict", cfg.strict_mode ? "true" : "false");
        }
        if (f.contains("default_rule_strength")) {
            cfg.default_rule_strength =
                get_number(f["default_rule_strength"], path + ": fis.default_rule_strength");
            note(cfg, "fis.default_rule_strength", format_double(cfg.default_rule_strength));
        }
    }

    if (doc.contains("stats")) {
        const json& s = doc["stats"];
        expect_keys(s, path + ":stats", {"resamples", "seed", "level", "p_mode"});
        if (s.contains("resamples")) {
            cfg.stats.resamples = s["resamples"].get<std::size_t>();
            note(cfg, "stats.resamples", std::to_string(cfg.stats.resamples));
        }
        if (s.contains("seed")) {
            cfg.stats.seed = s["seed"].get<std::uint64_t>();
            note(cfg, "stats.seed", std::to_string(cfg.stats.seed));
        }
        if (s.contains("level")) {
            cfg.stats.level = get_number(s["level"], path + ": stats.level");
            note(cfg, "stats.level", format_double(cfg.stats.level));
        }
        if (s.contains("p_mode")) {
            std::string mode = s["p_mode"].get<std::string>();
            if (mode == "asymptotic") cfg.stats.p_mode = PValueMode::Asymptotic;
            else if (mode == "exact") cfg.stats.p_mode = PValueMode::Exact;
            else throw ConfigError(path + ": stats.p_mode must be asymptotic|exact");
            note(cfg, "stats.p_mode", mode);
        }
    }

    if (doc.contains("expected_responses")) {
        cfg.expected_responses = doc["expected_responses"].get<std::size_t>();
        note(cfg, "expected_responses", std::to_string(cfg.expected_responses));
    }

    if (doc.contains("output_dir")) {
        cfg.output_dir = doc["output_dir"].get<std::string>();
        note(cfg, "output_dir", cfg.output_dir);
    }

    cfg.validate();
    return cfg;
}

std::string variable_to_json(const LinguisticVariable& v) {
    json terms = json::array();
    for (std::size_t i = 0; i < v.labels().size(); ++i) {
        const MembershipFunction& f = v.functions()[i];
        terms.push_back(json{{"label", v.labels()[i]},
                             {"kind", std::string(to_string(f.kind()))},
                             {"breakpoints", f.breakpoints()}});
    }
    return json{{"name", v.name()}, {"terms", std::move(terms)}}.dump(2);
}

LinguisticVariable variable_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("linguistic variable: ") + e.what());
    }
    expect_keys(doc, "linguistic variable", {"name", "terms"});
    if (!doc.contains("name") || !doc.contains("terms")) {
        throw ConfigError("linguistic variable: requires \"name\" and \"terms\"");
    }
    std::vector<std::string> labels;
    std::vector<MembershipFunction> functions;
    for (const json& term : doc["terms"]) {
        expect_keys(term, "linguistic variable term", {"label", "kind", "breakpoints"});
        labels.push_back(term.at("label").get<std::string>());
        auto kind = mf_kind_from_string(term.at("kind").get<std::string>());
        std::vector<double> bp = term.at("breakpoints").get<std::vector<double>>();
        switch (kind) {
            case MembershipFunction::Kind::Triangular:
                if (bp.size() != 3) throw ConfigError("triangular needs 3 breakpoints");
                functions.push_back(MembershipFunction::triangular(bp[0], bp[1], bp[2]));
                break;
            case MembershipFunction::Kind::Trapezoidal:
                if (bp.size() != 4) throw ConfigError("trapezoidal needs 4 breakpoints");
                functions.push_back(MembershipFunction::trapezoidal(bp[0], bp[1], bp[2], bp[3]));
                break;
            case MembershipFunction::Kind::LeftShoulder:
                if (bp.size() != 2) throw ConfigError("left_shoulder needs 2 breakpoints");
                functions.push_back(MembershipFunction::left_shoulder(bp[0], bp[1]));
                break;
            case MembershipFunction::Kind::RightShoulder:
                if (bp.size() != 2) throw ConfigError("right_shoulder needs 2 breakpoints");
                functions.push_back(MembershipFunction::right_shoulder(bp[0], bp[1]));
                break;
        }
    }
    return LinguisticVariable(doc["name"].get<std::string>(), std::move(labels),
                              std::move(functions));
}

} // namespace zwise
