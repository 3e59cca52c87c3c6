#pragma once

#include <stdexcept>
#include <string>

#include "cylobs/grid.hpp"

namespace cylobs {

/// Parse or validation failure; names the first offending key.
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string k, const std::string& msg)
        : std::runtime_error("config key '" + k + "': " + msg), key(std::move(k)) {}
};

enum class ProblemKind { poisson, rearrangement, obstacle, compare, counterexample, verify };

std::string to_string(ProblemKind k);

/// Flat JSON run configuration. Unknown keys are rejected.
struct RunConfig {
    ProblemKind problem = ProblemKind::verify;
    int d_cross = 1;
    int n_cross = 32;
    int n_axial = 17;
    double mass = 0.5;        // rearrangement
    double alpha = 0.02;      // obstacle
    double alpha1 = 0.01;     // compare / counterexample
    double alpha2 = 0.02;
    double cg_tol = 1e-10;
    double gap_tol = 1e-4;
    double obstacle_tol = 1e-6;
    double tol_v = -1.0;      // <0: auto, 1e-6 * max(alpha, 1)
    int fw_max_iter = 500;
    int obstacle_max_iter = 5000;
    std::string output_dir = "out";

    /// Canonical flat-JSON rendering (sorted keys); hashed into reports.
    std::string canonical_text() const;
    Grid make_grid() const { return Grid(d_cross, n_cross, n_axial); }
};

/// Parses the documented flat key-value JSON format; throws ConfigError on
/// missing, ill-typed, unknown, or out-of-range keys.
RunConfig parse_config(const std::string& text);

}  // namespace cylobs
