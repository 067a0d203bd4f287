#ifndef WALKMAX_COMMANDS_HPP
#define WALKMAX_COMMANDS_HPP

#include <map>
#include <string>

#include "walkmax/config.hpp"

namespace walkmax::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CommandOutcome {
    int exit_code = 0; // 0: all pass flags true, 1: some false
    std::map<std::string, bool> pass;
    std::string manifest_path;
};

// Dispatches cfg.command, writes CSV outputs plus an atomic manifest into
// cfg.out_dir. Identical (config, seed) reproduce all CSVs byte-identically
// for any worker count.
CommandOutcome run_command(const RunConfig& cfg);

} // namespace walkmax::cli

#endif
