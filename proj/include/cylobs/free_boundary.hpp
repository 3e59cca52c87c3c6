#pragma once

#include <span>
#include <string>
#include <vector>

#include "cylobs/obstacle.hpp"

namespace cylobs {

enum class FbClass { regular, singular_candidate, degenerate };

std::string to_string(FbClass c);

/// Free-boundary diagnostics for one cross-section node.
struct FbNode {
    int cross_index = 0;
    double x1 = 0.0, x2 = 0.0;
    double h_value = 0.0;  // 1 - trace_bottom - trace_top at the node
    std::vector<std::pair<double, double>> density_ratios;  // (radius, ratio)
    FbClass classification = FbClass::regular;
};

struct FreeBoundaryReport {
    std::vector<FbNode> nodes;
    double tol_v = 0.0;
    double min_h = 0.0;
};

struct FreeBoundaryOptions {
    double density_threshold = 0.1;  // smallest-radius ratio below this: singular candidate
    double tol_h = 1e-3;             // |h| at or below this: degenerate
};

/// Extracts the nodes adjacent to both {v > tol_v} and {v <= tol_v}, computes
/// h(x') from the cap normal traces, and measures coincidence density ratios
/// in discrete balls of the given radii (node counting). The classification
/// is a reporting heuristic, not an analytic claim. Rejects solutions with an
/// empty coincidence set.
FreeBoundaryReport analyze_free_boundary(const ObstacleSolution& sol, std::span<const double> radii,
                                         const FreeBoundaryOptions& opt = {});

}  // namespace cylobs
