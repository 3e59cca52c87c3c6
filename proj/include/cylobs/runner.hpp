#pragma once

#include <iosfwd>

#include "cylobs/config.hpp"

namespace cylobs {

/// Exit-code contract shared with the CLI.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 2,
    exit_nonconvergence = 3,
    exit_check_failure = 4,
};

/// Executes the configured pipeline, writes the artifacts (CSV fields, JSON
/// report, human-readable summary) into cfg.output_dir, and returns the exit
/// status. Identical configs produce bit-identical artifacts.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace cylobs
