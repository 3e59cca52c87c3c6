#pragma once

#include <cstdint>
#include <vector>

#include "cylobs/grid.hpp"
#include "cylobs/poisson.hpp"

namespace cylobs {

/// Minimization of J(u) = dirichlet_energy(u) + 2 * integral_D max(0, v)
/// with v the vertical average of u, over fields with prescribed boundary
/// values. The boundary data must satisfy
///   0 <= g(x', xn) <= (1 - xn) g(x', 0) + xn g(x', 1)
/// at every lateral node, with constant bottom and top caps; violations are
/// rejected at construction.
struct ObstacleProblem {
    Grid grid;
    BoundaryData boundary;

    ObstacleProblem(const Grid& g, BoundaryData bc);

    /// Largest boundary value (scale used for tolerances).
    double boundary_scale() const;
};

struct ObstacleOptions {
    double tol = 1e-6;        // certification tolerance on the optimality residual
    int max_iter = 5000;      // accelerated proximal gradient budget
    double cg_tol = 1e-12;    // inner linear solves
    double tol_v = -1.0;      // coincidence tolerance; <0 means 1e-6 * max(scale, 1)
    bool polish = true;       // active-set polish after the proximal phase
    enum class Init { affine, zero_interior } init = Init::affine;
};

struct ObstacleSolution {
    Field u;
    ReducedField v;             // vertical average of u
    ReducedField laplacian_u;   // column-averaged discrete Laplacian (interior columns)
    std::vector<std::uint8_t> coincidence;  // per cross node: v <= tol_v
    double J = 0.0;
    double tol_v = 0.0;
    double min_v = 0.0;
    double optimality_residual = 0.0;      // distance of lap column to [chi_{v>tol}, chi_{v>=-tol}]
    double max_lap_axial_variation = 0.0;  // max over columns of interior Lap_h u spread
    double coincidence_measure = 0.0;
    bool certified = false;
    SolveReport report;

    ObstacleSolution(const Grid& g) : u(g), v(g), laplacian_u(g) {}
};

/// Accelerated proximal gradient (column-separable prox of the vertical
/// average term) followed by a primal-dual active-set polish that solves the
/// frozen-mask linear problem exactly; the polish is accepted only if J does
/// not increase. Non-convergence returns the best iterate flagged
/// non-certified.
ObstacleSolution solve_obstacle(const ObstacleProblem& p, const ObstacleOptions& opt = {});

/// Max over interior nodes of D, one cell away from the free boundary, of
/// |Lap'_h v - chi_{v > tol_v} h(x')| with h = 1 - trace_bottom - trace_top.
double reduced_residual(const ObstacleSolution& sol);

struct ComparisonReport {
    double alpha1 = 0.0, alpha2 = 0.0;
    double max_v1_minus_v2 = 0.0;          // <= tol if the comparison principle holds
    double defect_measure = 0.0;           // |{v2 = 0} \ {v1 = 0}|
    int deep_defect_count = 0;             // defect nodes farther than one cell from the fb band
    double coincidence1 = 0.0, coincidence2 = 0.0;
    bool certified = false;
};

/// Solves both constant-boundary problems and reports the comparison data
/// for v1, v2. Requires 0 < alpha1 <= alpha2.
ComparisonReport compare_v(double alpha1, double alpha2, const Grid& grid,
                           const ObstacleOptions& opt = {});

struct CounterexampleReport {
    double alpha1 = 0.0, alpha2 = 0.0;
    bool applicable = false;               // false when {v2 = 0} is empty
    double max_excess = 0.0;               // max of u1 - u2 over {v2 = 0} x (0,1)
    double arg_x1 = 0.0, arg_x2 = 0.0, arg_xn = 0.0;
    double col_integral_max = 0.0;         // max |v_i| over the coincidence set of v2
    double coincidence2 = 0.0;
    bool certified = false;
};

/// Evaluates the failure of the comparison principle for u on {v2 = 0}.
CounterexampleReport comparison_counterexample(double alpha1, double alpha2, const Grid& grid,
                                               const ObstacleOptions& opt = {});

/// Discrete W^{2,2} seminorm (all axis pairs) on the region at least
/// margin_cells from the lateral boundary; margin_cells >= 2.
double second_difference_diagnostic(const ObstacleSolution& sol, int margin_cells);

}  // namespace cylobs
