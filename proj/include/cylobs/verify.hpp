#pragma once

#include <string>
#include <vector>

#include "cylobs/config.hpp"

namespace cylobs {

struct StageResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<StageResult> stages;
    bool all_pass() const {
        for (const auto& s : stages)
            if (!s.pass) return false;
        return true;
    }
};

/// Runs the full check suite on the configured grid, in order: Poisson
/// manufactured-solution convergence, energy identity, axial symmetry,
/// conditional-gradient certification and plateau structure, obstacle
/// invariants, the rearrangement/obstacle cross-check, the comparison
/// principle for v, the comparison counterexample search for u, and the
/// free-boundary report.
VerifyResult run_verify(const RunConfig& cfg);

std::string render_summary(const VerifyResult& r);

}  // namespace cylobs
