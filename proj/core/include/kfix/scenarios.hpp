#pragma once

#include "kfix/config.hpp"

namespace kfix {

// Process exit codes shared by the scenario runners and the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;

/**
 * Executes one scenario: runs the configured experiment, writes
 * report.json (plus CSV series and snapshots where the scenario produces
 * them) into the config's output directory, and returns the exit code.
 * Identical config and seed produce byte-identical outputs.
 */
int run_scenario(const RunConfig& rc);

}  // namespace kfix
