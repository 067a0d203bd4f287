#include "walkmax/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "walkmax/errors.hpp"

namespace walkmax::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": not a number: '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& section, const std::string& key,
                     const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long u = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": not a nonnegative integer: '" + v + "'");
    }
}

bool to_bool(const std::string& section, const std::string& key,
             const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("[" + section + "] " + key + ": not a boolean: '" + v + "'");
}

std::vector<double> to_double_list(const std::string& section,
                                   const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double(section, key, item));
    }
    return out;
}

std::vector<std::uint64_t> to_u64_list(const std::string& section,
                                       const std::string& key,
                                       const std::string& v) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_u64(section, key, item));
    }
    return out;
}

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"run", {"command", "seed", "trials", "out", "svg", "max_steps", "workers"}},
    {"jump", {"kind", "sigma", "beta", "alpha", "xmin", "scale", "shift", "centered"}},
    {"perturbation", {"law", "amplitude", "gamma_moment"}},
    {"drift", {"a_list", "T", "horizon_override"}},
    {"mu", {"grid", "eps", "T_split"}},
    {"normalize", {"n_lo", "n_hi", "ratio", "a_lo", "a_hi"}},
    {"inequality", {"n_grid", "theta_grid", "gamma", "pruitt_pow2"}},
    {"mstar",
     {"alpha", "skew", "T_proc", "grid_steps", "eps", "T_window", "nodes",
      "samples_per_node"}},
    {"tolerances", {}}, // any key, numeric value
};

} // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (kKnownKeys.find(current) == kKnownKeys.end())
                throw ConfigError("unknown section [" + current + "]");
            sections[current]; // may legitimately stay empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (current.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& known = kKnownKeys.at(current);
        if (current != "tolerances" && known.find(key) == known.end())
            throw ConfigError("unknown key '" + key + "' in section [" + current + "]");
        if (!sections[current].emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "' in section [" + current + "]");
    }

    RunConfig cfg;
    cfg.echo = sections;

    if (const auto it = sections.find("run"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "command") cfg.command = v;
            else if (k == "seed") cfg.seed = to_u64("run", k, v);
            else if (k == "trials") cfg.trials = to_u64("run", k, v);
            else if (k == "out") cfg.out_dir = v;
            else if (k == "svg") cfg.svg = to_bool("run", k, v);
            else if (k == "max_steps") cfg.max_steps = to_u64("run", k, v);
            else if (k == "workers") cfg.workers = static_cast<unsigned>(to_u64("run", k, v));
        }
    }
    if (const auto it = sections.find("jump"); it != sections.end()) {
        try {
            cfg.spec = jumps::JumpSpec::from_config_block(it->second);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("[jump] ") + e.what());
        }
    }
    if (const auto it = sections.find("perturbation"); it != sections.end()) {
        std::string law = "uniform";
        double amplitude = 1.0, gamma = 4.0;
        for (const auto& [k, v] : it->second) {
            if (k == "law") law = v;
            else if (k == "amplitude") amplitude = to_double("perturbation", k, v);
            else if (k == "gamma_moment") gamma = to_double("perturbation", k, v);
        }
        try {
            if (law == "uniform")
                cfg.perturbation = walksim::PerturbationSpec::uniform(amplitude, gamma);
            else if (law == "rademacher")
                cfg.perturbation = walksim::PerturbationSpec::rademacher(amplitude, gamma);
            else
                throw ConfigError("[perturbation] unknown law '" + law + "'");
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("[perturbation] ") + e.what());
        }
    }
    if (const auto it = sections.find("drift"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "a_list") cfg.a_list = to_double_list("drift", k, v);
            else if (k == "T") cfg.T = to_double("drift", k, v);
            else if (k == "horizon_override") cfg.horizon_override = to_u64("drift", k, v);
        }
    }
    if (const auto it = sections.find("mu"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "grid") cfg.mu_grid = to_double_list("mu", k, v);
            else if (k == "eps") cfg.eps = to_double("mu", k, v);
            else if (k == "T_split") cfg.T_split = to_double("mu", k, v);
        }
    }
    if (const auto it = sections.find("normalize"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "n_lo") cfg.n_lo = to_double("normalize", k, v);
            else if (k == "n_hi") cfg.n_hi = to_double("normalize", k, v);
            else if (k == "ratio") cfg.n_ratio = to_double("normalize", k, v);
            else if (k == "a_lo") cfg.a_lo = to_double("normalize", k, v);
            else if (k == "a_hi") cfg.a_hi = to_double("normalize", k, v);
        }
    }
    if (const auto it = sections.find("inequality"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "n_grid") cfg.n_grid = to_u64_list("inequality", k, v);
            else if (k == "theta_grid") cfg.theta_grid = to_double_list("inequality", k, v);
            else if (k == "gamma") cfg.karamata_gamma = to_double("inequality", k, v);
            else if (k == "pruitt_pow2") cfg.pruitt_pow2 = static_cast<int>(to_u64("inequality", k, v));
        }
    }
    if (const auto it = sections.find("mstar"); it != sections.end()) {
        for (const auto& [k, v] : it->second) {
            if (k == "alpha") cfg.mstar_alpha = to_double("mstar", k, v);
            else if (k == "skew") {
                if (v == "symmetric") cfg.mstar_skew = limits::SkewTag::Symmetric;
                else if (v == "spectrally_positive") cfg.mstar_skew = limits::SkewTag::SpectrallyPositive;
                else if (v == "spectrally_negative") cfg.mstar_skew = limits::SkewTag::SpectrallyNegative;
                else throw ConfigError("[mstar] unknown skew '" + v + "'");
            } else if (k == "T_proc") cfg.mstar_T = to_double("mstar", k, v);
            else if (k == "grid_steps") cfg.mstar_grid_steps = to_u64("mstar", k, v);
            else if (k == "eps") cfg.window_eps = to_double("mstar", k, v);
            else if (k == "T_window") cfg.window_T = to_double("mstar", k, v);
            else if (k == "nodes") cfg.window_nodes = static_cast<int>(to_u64("mstar", k, v));
            else if (k == "samples_per_node") cfg.window_samples = to_u64("mstar", k, v);
        }
    }
    if (const auto it = sections.find("tolerances"); it != sections.end()) {
        for (const auto& [k, v] : it->second)
            cfg.tolerances[k] = to_double("tolerances", k, v);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace walkmax::cli
