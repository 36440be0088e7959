#include "binapprox/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace binapprox {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

ProcessKind to_process(const std::string& v) {
    if (v == "wiener") return ProcessKind::wiener;
    if (v == "ito") return ProcessKind::ito;
    if (v == "constant") return ProcessKind::constant;
    if (v == "step") return ProcessKind::step_jump;
    if (v == "sine") return ProcessKind::sine;
    if (v == "table") return ProcessKind::custom_table;
    throw ConfigError("process", "unknown process '" + v + "' (wiener, ito, constant, step, sine, table)");
}

NormKind to_norm(const std::string& v) {
    if (v == "X") return NormKind::X;
    if (v == "Xc") return NormKind::Xc;
    if (v == "sup") return NormKind::sup;
    throw ConfigError("norm", "unknown norm '" + v + "' (X, Xc, sup)");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"process", [](auto& c, auto&, auto& v) { c.process.kind = to_process(v); }},
        {"x0", [](auto& c, auto& k, auto& v) { c.process.x0 = to_double(k, v); }},
        {"level", [](auto& c, auto& k, auto& v) { c.process.level = to_double(k, v); }},
        {"jump_time", [](auto& c, auto& k, auto& v) { c.process.jump_time = to_double(k, v); }},
        {"amplitude", [](auto& c, auto& k, auto& v) { c.process.amplitude = to_double(k, v); }},
        {"frequency", [](auto& c, auto& k, auto& v) { c.process.frequency = to_double(k, v); }},
        {"table", [](auto& c, auto& k, auto& v) { c.process.table = to_doubles(k, v); }},
        {"log_scale", [](auto& c, auto& k, auto& v) { c.process.exponentiate = to_bool(k, v); }},
        {"drift", [](auto& c, auto&, auto& v) { c.drift_selector = v; }},
        {"diffusion", [](auto& c, auto&, auto& v) { c.diffusion_selector = v; }},
        {"T", [](auto& c, auto& k, auto& v) { c.horizon = to_double(k, v); }},
        {"n_fine", [](auto& c, auto& k, auto& v) { c.n_fine = to_unsigned(k, v); }},
        {"pipeline", [](auto& c, auto&, auto& v) { c.pipeline = pipeline_from_string(v); }},
        {"q", [](auto& c, auto& k, auto& v) { c.q = to_double(k, v); }},
        {"norm", [](auto& c, auto&, auto& v) { c.norm = to_norm(v); }},
        {"m", [](auto& c, auto& k, auto& v) { c.m_values = to_doubles(k, v); }},
        {"p", [](auto& c, auto& k, auto& v) { c.p_values = to_doubles(k, v); }},
        {"n",
         [](auto& c, auto& k, auto& v) {
             c.n_values.clear();
             for (const auto& item : split_list(v)) c.n_values.push_back(to_unsigned(k, item));
             if (c.n_values.empty()) throw ConfigError(k, "empty list");
         }},
        {"paths", [](auto& c, auto& k, auto& v) { c.paths = to_unsigned(k, v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = to_unsigned(k, v); }},
        {"out", [](auto& c, auto&, auto& v) { c.out_dir = v; }},
        {"epsilon", [](auto& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
        {"validate_paths", [](auto& c, auto& k, auto& v) { c.validate_paths = to_unsigned(k, v); }},
        {"threads", [](auto& c, auto& k, auto& v) { c.threads = static_cast<unsigned>(to_unsigned(k, v)); }},
        {"hoelder_q", [](auto& c, auto& k, auto& v) { c.hoelder_q = to_double(k, v); }},
        {"theta", [](auto& c, auto& k, auto& v) { c.theta = to_double(k, v); }},
        {"eps0", [](auto& c, auto& k, auto& v) { c.eps0 = to_double(k, v); }},
        {"sigma_bound", [](auto& c, auto& k, auto& v) { c.sigma_bound = to_double(k, v); }},
        {"sigma", [](auto& c, auto&, auto& v) { c.sigma_selector = v; }},
        {"s0", [](auto& c, auto& k, auto& v) { c.s0 = to_double(k, v); }},
        {"strike", [](auto& c, auto& k, auto& v) { c.strike = to_double(k, v); }},
        {"vol", [](auto& c, auto& k, auto& v) { c.vol = to_double(k, v); }},
        {"rate", [](auto& c, auto& k, auto& v) { c.rate = to_double(k, v); }},
        {"periods", [](auto& c, auto& k, auto& v) { c.periods = to_unsigned(k, v); }},
        {"option",
         [](auto& c, auto& k, auto& v) {
             if (v != "call" && v != "put") throw ConfigError(k, "expected call or put");
             c.option = v;
         }},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, where + ": unknown key");
        if (!seen.insert(key).second) throw ConfigError(key, where + ": duplicate key");
        if (value.empty()) throw ConfigError(key, where + ": missing value");
        try {
            it->second(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(e.key, where + ": " + std::string(e.what()).substr(e.key.size() + 2));
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in, path);
}

}  // namespace binapprox
