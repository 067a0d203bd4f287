#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "walkmax/commands.hpp"
#include "walkmax/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"walkmax: maxima of negatively drifted random walks — norming "
                 "sequences, simulation, series identities, limit laws"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false, svg = false;
    std::uint64_t max_steps = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_flag("--svg", svg, "emit SVG overlay plots");
        sub->add_option("--max-steps", max_steps, "step budget override");
    };
    for (const char* name : {"normalize", "limit", "spitzer", "inequality", "mstar"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = walkmax::cli::parse_config_file(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (!cfg.command.empty() && cfg.command != sub)
            throw walkmax::ConfigError("config command '" + cfg.command +
                                       "' does not match subcommand '" + sub + "'");
        cfg.command = sub;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (svg) cfg.svg = true;
        if (max_steps > 0) cfg.max_steps = max_steps;

        const auto outcome = walkmax::cli::run_command(cfg);
        for (const auto& [name, ok] : outcome.pass)
            std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
        std::cout << "manifest: " << outcome.manifest_path << '\n';
        return outcome.exit_code;
    } catch (const walkmax::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
