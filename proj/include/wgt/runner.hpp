#pragma once

#include <string>

#include "wgt/config.hpp"

namespace wgt {

// Process exit codes, one per failure class.
enum ExitCode : int {
    exit_ok = 0,
    exit_generic = 1,
    exit_config = 2,
    exit_cfl = 3,
    exit_numeric = 4,
    exit_acceptance_miss = 5,
};

// Dispatches one subcommand (solve | dn-gap | xray | reconstruct | stability |
// verify), writing artifacts under cfg.out_dir.
int run_subcommand(const std::string& cmd, const RunConfig& cfg);

}  // namespace wgt
