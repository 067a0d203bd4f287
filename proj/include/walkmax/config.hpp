#ifndef WALKMAX_CONFIG_HPP
#define WALKMAX_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walkmax/jumps.hpp"
#include "walkmax/limit_laws.hpp"
#include "walkmax/walksim.hpp"

namespace walkmax::cli {

// Flat key=value configuration with [section] headers. Unknown sections or
// keys are rejected before any computation starts.
struct RunConfig {
    std::string command;

    // [run]
    std::uint64_t seed = 1;
    std::uint64_t trials = 10000;
    std::string out_dir = "out";
    bool svg = false;
    std::uint64_t max_steps = 10000000000ULL;
    unsigned workers = 0;

    // [jump]
    std::optional<jumps::JumpSpec> spec;

    // [perturbation]
    std::optional<walksim::PerturbationSpec> perturbation;

    // [drift]
    std::vector<double> a_list;
    double T = 20.0;
    std::uint64_t horizon_override = 0;

    // [mu]
    std::vector<double> mu_grid;
    double eps = 0.1;
    double T_split = 10.0;

    // [normalize]
    double n_lo = 100.0;
    double n_hi = 1e6;
    double n_ratio = 1.1;
    double a_lo = 0.01;
    double a_hi = 0.1;

    // [inequality]
    std::vector<std::uint64_t> n_grid = {100, 1000, 10000};
    std::vector<double> theta_grid = {0.5, 1.0, 2.0, 4.0};
    double karamata_gamma = 0.25;
    int pruitt_pow2 = 12;

    // [mstar]
    double mstar_alpha = 2.0;
    limits::SkewTag mstar_skew = limits::SkewTag::Symmetric;
    double mstar_T = 50.0;
    std::uint64_t mstar_grid_steps = 100000;
    double window_eps = 1e-4;
    double window_T = 60.0;
    int window_nodes = 257;
    std::uint64_t window_samples = 20000;

    // [tolerances]
    std::map<std::string, double> tolerances;

    double tolerance(const std::string& key, double fallback) const {
        const auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }

    // canonical echo of every populated section, used for hashing and the
    // manifest
    std::map<std::string, std::map<std::string, std::string>> echo;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace walkmax::cli

#endif
