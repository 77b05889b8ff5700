#include "rmerton/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace rmerton {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value +
                          "' as an unsigned integer");
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(SelectorMode mode) {
    return mode == SelectorMode::paper ? "paper" : "sign-logic";
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> keys;
    std::istringstream in(text);
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
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        keys[key] = value;
    }
    return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

SimConfig config_from_keys(const std::map<std::string, std::string>& keys) {
    static const std::vector<std::string> known = {
        "T", "n_rebalance", "steps_per_interval", "n_paths", "seed",
        "S0", "mu0", "nu0", "x0",
        "theta_mu_min", "theta_mu_max", "eta_mu_min", "eta_mu_max",
        "theta_sigma_min", "theta_sigma_max", "eta_sigma_min", "eta_sigma_max",
        "sigma_mu", "xi", "r", "bound_M",
        "mode", "out_dir", "pi_l4_threshold",
        "pi_grid_min", "pi_grid_max", "pi_grid_points",
    };
    for (const auto& [key, value] : keys)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");

    static const std::vector<std::string> required = {
        "T", "n_rebalance", "steps_per_interval", "n_paths", "seed",
        "S0", "mu0", "nu0", "x0",
        "theta_mu_min", "theta_mu_max", "eta_mu_min", "eta_mu_max",
        "theta_sigma_min", "theta_sigma_max", "eta_sigma_min", "eta_sigma_max",
        "sigma_mu", "xi", "r", "bound_M",
    };
    for (const auto& key : required)
        if (!keys.count(key)) throw ConfigError("missing required config key '" + key + "'");

    const auto get = [&keys](const std::string& k) { return keys.at(k); };

    SimConfig c;
    c.horizon = parse_double("T", get("T"));
    c.n_rebalance = static_cast<int>(parse_long("n_rebalance", get("n_rebalance")));
    c.steps_per_interval =
        static_cast<int>(parse_long("steps_per_interval", get("steps_per_interval")));
    c.n_paths = parse_long("n_paths", get("n_paths"));
    c.seed = parse_u64("seed", get("seed"));
    c.s0 = parse_double("S0", get("S0"));
    c.mu0 = parse_double("mu0", get("mu0"));
    c.nu0 = parse_double("nu0", get("nu0"));
    c.x0 = parse_double("x0", get("x0"));
    c.box.theta_mu_min = parse_double("theta_mu_min", get("theta_mu_min"));
    c.box.theta_mu_max = parse_double("theta_mu_max", get("theta_mu_max"));
    c.box.eta_mu_min = parse_double("eta_mu_min", get("eta_mu_min"));
    c.box.eta_mu_max = parse_double("eta_mu_max", get("eta_mu_max"));
    c.box.theta_sigma_min = parse_double("theta_sigma_min", get("theta_sigma_min"));
    c.box.theta_sigma_max = parse_double("theta_sigma_max", get("theta_sigma_max"));
    c.box.eta_sigma_min = parse_double("eta_sigma_min", get("eta_sigma_min"));
    c.box.eta_sigma_max = parse_double("eta_sigma_max", get("eta_sigma_max"));
    c.box.sigma_mu = parse_double("sigma_mu", get("sigma_mu"));
    c.box.xi = parse_double("xi", get("xi"));
    c.box.r = parse_double("r", get("r"));
    c.box.bound_m = parse_double("bound_M", get("bound_M"));

    if (auto it = keys.find("mode"); it != keys.end()) {
        if (it->second == "paper")
            c.mode = SelectorMode::paper;
        else if (it->second == "sign-logic" || it->second == "sign_logic")
            c.mode = SelectorMode::sign_logic;
        else
            throw ConfigError("config key 'mode': expected 'paper' or 'sign-logic', got '" +
                              it->second + "'");
    }
    if (auto it = keys.find("out_dir"); it != keys.end()) c.out_dir = it->second;
    if (auto it = keys.find("pi_l4_threshold"); it != keys.end())
        c.pi_l4_threshold = parse_double("pi_l4_threshold", it->second);
    if (auto it = keys.find("pi_grid_min"); it != keys.end())
        c.pi_grid_min = parse_double("pi_grid_min", it->second);
    if (auto it = keys.find("pi_grid_max"); it != keys.end())
        c.pi_grid_max = parse_double("pi_grid_max", it->second);
    if (auto it = keys.find("pi_grid_points"); it != keys.end())
        c.pi_grid_points = static_cast<int>(parse_long("pi_grid_points", it->second));

    return c;
}

std::vector<std::string> validate_config(const SimConfig& config) {
    std::vector<std::string> violations = validate_box(config.box);
    if (!(config.horizon > 0.0)) violations.emplace_back("T must be > 0");
    if (config.n_rebalance < 1) violations.emplace_back("n_rebalance must be >= 1");
    if (config.steps_per_interval < 1) violations.emplace_back("steps_per_interval must be >= 1");
    if (config.n_paths < 1) violations.emplace_back("n_paths must be >= 1");
    if (!(config.s0 > 0.0)) violations.emplace_back("S0 must be > 0");
    if (!(config.nu0 > 0.0)) violations.emplace_back("nu0 must be > 0");
    if (!(config.x0 > 0.0)) violations.emplace_back("x0 must be > 0");
    if (!std::isfinite(config.mu0)) violations.emplace_back("mu0 must be finite");
    if (config.pi_grid_points < 1) violations.emplace_back("pi_grid_points must be >= 1");
    if (!(config.pi_grid_min <= config.pi_grid_max))
        violations.emplace_back("pi_grid_min must be <= pi_grid_max");
    if (!(config.pi_l4_threshold > 0.0)) violations.emplace_back("pi_l4_threshold must be > 0");
    return violations;
}

std::vector<std::string> canonical_lines(const SimConfig& c) {
    std::vector<std::string> lines;
    const auto add = [&lines](const std::string& k, const std::string& v) {
        lines.push_back(k + " = " + v);
    };
    add("T", format_double(c.horizon));
    add("S0", format_double(c.s0));
    add("bound_M", format_double(c.box.bound_m));
    add("eta_mu_max", format_double(c.box.eta_mu_max));
    add("eta_mu_min", format_double(c.box.eta_mu_min));
    add("eta_sigma_max", format_double(c.box.eta_sigma_max));
    add("eta_sigma_min", format_double(c.box.eta_sigma_min));
    add("mode", to_string(c.mode));
    add("mu0", format_double(c.mu0));
    add("n_paths", std::to_string(c.n_paths));
    add("n_rebalance", std::to_string(c.n_rebalance));
    add("nu0", format_double(c.nu0));
    add("pi_grid_max", format_double(c.pi_grid_max));
    add("pi_grid_min", format_double(c.pi_grid_min));
    add("pi_grid_points", std::to_string(c.pi_grid_points));
    add("pi_l4_threshold", format_double(c.pi_l4_threshold));
    add("r", format_double(c.box.r));
    add("seed", std::to_string(c.seed));
    add("sigma_mu", format_double(c.box.sigma_mu));
    add("steps_per_interval", std::to_string(c.steps_per_interval));
    add("theta_mu_max", format_double(c.box.theta_mu_max));
    add("theta_mu_min", format_double(c.box.theta_mu_min));
    add("theta_sigma_max", format_double(c.box.theta_sigma_max));
    add("theta_sigma_min", format_double(c.box.theta_sigma_min));
    add("x0", format_double(c.x0));
    add("xi", format_double(c.box.xi));
    return lines;
}

std::uint64_t config_fingerprint(const SimConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (const auto& line : canonical_lines(config)) {
        for (const char ch : line) {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[fp & 0xf];
        fp >>= 4;
    }
    return out;
}

}  // namespace rmerton
