#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "cylobs/grid.hpp"
#include "cylobs/operators.hpp"

namespace cylobs {

/// Convergence certificate of an iterative solve.
struct SolveReport {
    int iterations = 0;
    double residual_rel = 0.0;
    double tolerance = 0.0;
    bool converged = false;
    std::string wall_notes;
};

/// Thrown when an iterative solver exhausts its iteration cap.
struct SolveFailure : std::runtime_error {
    double residual_rel;
    int iterations;
    SolveFailure(double res, int iters)
        : std::runtime_error("solver did not converge: relative residual " + std::to_string(res) +
                             " after " + std::to_string(iters) + " iterations"),
          residual_rel(res),
          iterations(iters) {}
};

/// Dirichlet problem -Lap u = rhs on the cylinder. A ReducedField rhs means
/// f(x) = f(x'), extended constant along xn.
struct PoissonProblem {
    Grid grid;
    Field rhs;
    BoundaryData boundary;

    static PoissonProblem with_field_rhs(const Grid& g, Field rhs, BoundaryData bc) {
        rhs.validate_finite();
        bc.validate(g);
        return PoissonProblem{g, std::move(rhs), std::move(bc)};
    }

    static PoissonProblem with_reduced_rhs(const Grid& g, const ReducedField& rhs, BoundaryData bc) {
        rhs.validate_finite();
        bc.validate(g);
        return PoissonProblem{g, extend_to_cylinder(rhs), std::move(bc)};
    }
};

struct CgOptions {
    double tol = 1e-10;
    int max_iter = 0;              // 0: 10 * number of unknowns
    const Field* warm_start = nullptr;
};

/// Conjugate gradient on the interior unknowns, matrix-free 5/7-point stencil.
/// Boundary nodes of the returned field carry the given data exactly.
/// Throws SolveFailure if the iteration cap is reached.
std::pair<Field, SolveReport> solve_dirichlet(const PoissonProblem& p, const CgOptions& opt = {});

inline std::pair<Field, SolveReport> solve_dirichlet(const PoissonProblem& p, double tol) {
    CgOptions opt;
    opt.tol = tol;
    return solve_dirichlet(p, opt);
}

/// Rearrangement energy Phi(f) = <f, v_f> over D, where u_f solves the
/// Dirichlet problem with zero boundary data and rhs f(x').
double energy_phi(const ReducedField& f, double cg_tol = 1e-10);

}  // namespace cylobs
