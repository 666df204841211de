// serialization.hpp
#pragma once
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "generators.hpp"
#include "instance.hpp"
#include "trial.hpp"

namespace streambandit {

using json = nlohmann::json;

// 17 significant digits: enough to round-trip any double.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string to_string(Delta2Mode m) { return m == Delta2Mode::exact ? "exact" : "lower_bound"; }

inline Delta2Mode parse_delta2_mode(const std::string& s) {
    if (s == "exact") return Delta2Mode::exact;
    if (s == "lower_bound") return Delta2Mode::lower_bound;
    throw std::invalid_argument("unknown delta2_mode '" + s + "'");
}

// {"label", "means", "known_delta2", "delta2_mode"} plus "mean_residuals"
// when any arm carries a sub-ulp part.
inline std::string instance_to_json(const BanditInstance& inst) {
    std::ostringstream os;
    os << "{\n  \"label\": " << json(inst.label).dump() << ",\n  \"means\": [";
    bool any_residual = false;
    for (std::size_t i = 0; i < inst.arms.size(); ++i) {
        os << (i ? ", " : "") << format_real(inst.arms[i].mean);
        any_residual = any_residual || inst.arms[i].residual != 0.0;
    }
    os << "],\n";
    if (any_residual) {
        os << "  \"mean_residuals\": [";
        for (std::size_t i = 0; i < inst.arms.size(); ++i) os << (i ? ", " : "") << format_real(inst.arms[i].residual);
        os << "],\n";
    }
    os << "  \"known_delta2\": " << (inst.known_delta2 ? format_real(*inst.known_delta2) : "null") << ",\n";
    os << "  \"delta2_mode\": \"" << to_string(inst.delta2_mode) << "\"\n}\n";
    return os.str();
}

inline BanditInstance instance_from_json(const json& j) {
    BanditInstance inst;
    inst.label = j.value("label", std::string{});
    const auto& means = j.at("means");
    if (!means.is_array() || means.empty()) throw std::invalid_argument("instance: 'means' must be a nonempty array");
    for (const auto& m : means) inst.arms.push_back({m.get<double>(), 0.0});
    if (j.contains("mean_residuals")) {
        const auto& res = j.at("mean_residuals");
        if (res.size() != inst.arms.size()) throw std::invalid_argument("instance: mean_residuals length mismatch");
        for (std::size_t i = 0; i < res.size(); ++i) inst.arms[i].residual = res[i].get<double>();
    }
    if (j.contains("known_delta2") && !j.at("known_delta2").is_null()) inst.known_delta2 = j.at("known_delta2").get<double>();
    inst.delta2_mode = parse_delta2_mode(j.value("delta2_mode", std::string{"exact"}));
    return inst;
}

inline BanditInstance instance_from_string(const std::string& text) { return instance_from_json(json::parse(text)); }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline BanditInstance load_instance(const std::string& path) {
    try {
        return instance_from_string(read_text(path));
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void save_instance(const BanditInstance& inst, const std::string& path) { write_text(path, instance_to_json(inst)); }

inline json to_json(const HardInstanceMeta& m) {
    json j;
    j["n"] = m.params.n;
    j["B"] = m.params.batches;
    j["C"] = m.params.c;
    j["log_base"] = HardInstanceParams::log_base;
    j["gamma_requested"] = m.params.gamma;
    j["gamma"] = m.gamma;
    j["chi"] = m.chi;
    j["theta"] = m.theta;
    j["special_positions"] = json::array();
    for (auto [a, b] : m.special_positions) j["special_positions"].push_back({a, b});
    j["batch_bounds"] = json::array();
    for (auto [a, b] : m.batch_bounds) j["batch_bounds"].push_back({a, b});
    return j;
}

inline json to_json(const AlgorithmConfig& c) {
    json j;
    j["algorithm"] = to_string(c.algorithm);
    j["P"] = c.passes ? json(*c.passes) : json(nullptr);
    j["delta"] = c.delta;
    j["delta2_source"] = to_string(c.delta2_source);
    j["pass_cap"] = c.pass_cap ? json(*c.pass_cap) : json(nullptr);
    return j;
}

inline AlgorithmConfig config_from_json(const json& j) {
    AlgorithmConfig c = AlgorithmConfig::of(parse_algorithm(j.at("algorithm").get<std::string>()));
    if (j.contains("P") && !j.at("P").is_null()) c.passes = j.at("P").get<std::size_t>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("delta2_source")) c.delta2_source = parse_delta2_source(j.at("delta2_source").get<std::string>());
    if (j.contains("pass_cap") && !j.at("pass_cap").is_null()) c.pass_cap = j.at("pass_cap").get<std::size_t>();
    return c;
}

inline json to_json(const TrialResult& r) {
    json j;
    j["algorithm"] = r.algorithm;
    j["seed"] = r.seed;
    j["returned_arm"] = r.returned_arm ? json(*r.returned_arm) : json(nullptr);
    j["correct"] = r.correct;
    j["total_pulls"] = r.total_pulls;
    j["passes_used"] = r.passes_used;
    j["peak_arm_memory"] = r.peak_arm_memory;
    j["peak_stats_words"] = r.peak_stats_words ? json(*r.peak_stats_words) : json("unbounded");
    j["failure_reason"] = r.failure_reason ? json(*r.failure_reason) : json(nullptr);
    return j;
}

} // namespace streambandit
