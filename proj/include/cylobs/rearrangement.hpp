#pragma once

#include <vector>

#include "cylobs/grid.hpp"
#include "cylobs/poisson.hpp"

namespace cylobs {

/// Relaxed rearrangement element: values in [0,1] on the cross-section grid
/// with a fixed quadrature mass over D.
struct Density {
    Grid grid;
    std::vector<double> values;
    double mass = 0.0;

    /// Validates 0 <= value <= 1 (tiny drift is clamped) and that the
    /// quadrature of the values matches the stated mass to 1e-12.
    static Density from_values(const Grid& g, std::vector<double> vals, double mass);

    static Density uniform(const Grid& g, double mass) {
        const double measure = g.domain_measure();
        if (mass <= 0.0 || mass > measure + 1e-12)
            throw std::invalid_argument("Density: mass out of (0, |D|]");
        return from_values(g, std::vector<double>(g.cross_count(), mass / measure), mass);
    }

    ReducedField as_reduced() const {
        ReducedField f(grid);
        f.values = values;
        return f;
    }
};

/// Minimizer of <f, v> over {0 <= f <= 1, quadrature(f) = mass}: fill f = 1
/// on the nodes with smallest v, one fractional threshold node; ties broken
/// by lexicographic node index.
Density bathtub_lmo(const ReducedField& v, double mass);

struct FwRecord {
    int iteration;
    double objective;
    double gap;
};

struct RearrangementSolution {
    Density f_hat;
    Field u_hat;
    ReducedField v_hat;
    double alpha = 0.0;      // max over D of v_hat (plateau value)
    double fw_gap = 0.0;
    double objective = 0.0;
    bool certified = false;
    double gap_tol = 0.0;
    double mass = 0.0;
    std::vector<FwRecord> history;

    explicit RearrangementSolution(const Grid& g)
        : f_hat{g, std::vector<double>(g.cross_count(), 0.0), 0.0}, u_hat(g), v_hat(g) {}
};

struct FrankWolfeOptions {
    double gap_tol = 1e-4;   // relative to |objective|
    int max_iter = 500;
    double cg_tol = 1e-10;
};

/// Conditional gradient over the relaxed class with the bathtub linear
/// oracle and exact line search (the objective is quadratic in f). Each
/// iteration solves the Dirichlet problem twice, for v_f and v_d. Stops when
/// the Frank-Wolfe gap <f - f~, 2 v_f> falls below gap_tol * |objective|;
/// on max_iter the last iterate is returned flagged non-certified.
RearrangementSolution frank_wolfe(double mass, const Grid& grid, const FrankWolfeOptions& opt = {});

struct StructureReport {
    double alpha = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    double max_v_minus_alpha = 0.0;       // (a) v_hat <= alpha
    double min_f_on_low_v = 1.0;          // (b) f_hat on {v_hat < alpha - eps}
    double max_vdev_on_fractional = 0.0;  // (c) |v_hat - alpha| on {f_hat <= 1 - delta}
    double min_f = 1.0;                   // (d) diagnostic, not asserted
    double fractional_measure = 0.0;      // (e) measure of {delta < f < 1 - delta}
    bool full_mass = false;               // mass == |D|: (e) is vacuous
    bool pass_a = false, pass_b = false, pass_c = false, pass_e = false;
    bool pass() const { return pass_a && pass_b && pass_c && pass_e; }
};

/// Checks the plateau structure of a certified solution at the given
/// tolerances. Rejects uncertified input.
StructureReport verify_structure(const RearrangementSolution& sol, double eps, double delta);

}  // namespace cylobs
