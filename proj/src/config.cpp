#include "cvbit/config.hpp"
#include "cvbit/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cvbit {

const Config& default_config() {
    static const Config cfg{};
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: bad numeric value for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ParseError("config: bad integer value for '" + key + "': " + value);
    }
}

} // namespace

void apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(Config&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"symmetry_tol", [](Config& c, auto& k, auto& v) { c.symmetry_tol = parse_double(k, v); }},
        {"physicality_tol", [](Config& c, auto& k, auto& v) { c.physicality_tol = parse_double(k, v); }},
        {"hermiticity_tol", [](Config& c, auto& k, auto& v) { c.hermiticity_tol = parse_double(k, v); }},
        {"trace_tol", [](Config& c, auto& k, auto& v) { c.trace_tol = parse_double(k, v); }},
        {"tail_tol", [](Config& c, auto& k, auto& v) { c.tail_tol = parse_double(k, v); }},
        {"cutoff_cap", [](Config& c, auto& k, auto& v) { c.cutoff_cap = parse_int(k, v); }},
        {"imag_residual_tol", [](Config& c, auto& k, auto& v) { c.imag_residual_tol = parse_double(k, v); }},
        {"quad_nodes_factor", [](Config& c, auto& k, auto& v) { c.quad_nodes_factor = parse_int(k, v); }},
        {"quad_min_nodes", [](Config& c, auto& k, auto& v) { c.quad_min_nodes = parse_int(k, v); }},
        {"series_band_tol", [](Config& c, auto& k, auto& v) { c.series_band_tol = parse_double(k, v); }},
        {"series_nmax", [](Config& c, auto& k, auto& v) { c.series_nmax = parse_int(k, v); }},
        {"opt_grid", [](Config& c, auto& k, auto& v) { c.opt_grid = parse_int(k, v); }},
        {"opt_refine_passes", [](Config& c, auto& k, auto& v) { c.opt_refine_passes = parse_int(k, v); }},
        {"opt_angle_tol", [](Config& c, auto& k, auto& v) { c.opt_angle_tol = parse_double(k, v); }},
        {"opt_value_tol", [](Config& c, auto& k, auto& v) { c.opt_value_tol = parse_double(k, v); }},
        {"sample_extent", [](Config& c, auto& k, auto& v) { c.sample_extent = parse_double(k, v); }},
        {"sample_cells", [](Config& c, auto& k, auto& v) { c.sample_cells = parse_int(k, v); }},
        {"sample_underflow_tol", [](Config& c, auto& k, auto& v) { c.sample_underflow_tol = parse_double(k, v); }},
        {"random_cm_max_attempts", [](Config& c, auto& k, auto& v) { c.random_cm_max_attempts = parse_int(k, v); }},
        {"lambda_max", [](Config& c, auto& k, auto& v) { c.lambda_max = parse_double(k, v); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError("config: unknown key '" + key + "'");
    it->second(cfg, key, value);
}

Config load_config_file(const std::string& path, const Config& base) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    Config cfg = base;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: line " + std::to_string(lineno) + " is not key=value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

} // namespace cvbit
