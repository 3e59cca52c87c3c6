#include "cylobs/poisson.hpp"

#include <cmath>
#include <vector>

namespace cylobs {

namespace {

/// Matrix-free application of -Lap_h with zero Dirichlet data: x holds
/// interior values at their node positions and zeros on the boundary.
struct InteriorOperator {
    const Grid& g;
    std::vector<int> interior;  // node indices of interior nodes
    int stride_x;
    double inv_hc2, inv_ha2, diag;

    explicit InteriorOperator(const Grid& grid) : g(grid) {
        stride_x = (g.d_cross == 1 ? 1 : g.n_cross) * g.n_axial;
        inv_hc2 = 1.0 / (g.h_cross * g.h_cross);
        inv_ha2 = 1.0 / (g.h_axial * g.h_axial);
        diag = 2.0 * g.d_cross * inv_hc2 + 2.0 * inv_ha2;
        interior.reserve(g.node_count());
        for (int c = 0; c < g.cross_count(); ++c) {
            if (g.cross_on_boundary(c)) continue;
            for (int j = 1; j < g.n_axial - 1; ++j) interior.push_back(g.node_index(c, j));
        }
    }

    void apply(const std::vector<double>& x, std::vector<double>& out) const {
        const int sy = g.n_axial;
        for (int n : interior) {
            double v = diag * x[n];
            v -= (x[n - stride_x] + x[n + stride_x]) * inv_hc2;
            if (g.d_cross == 2) v -= (x[n - sy] + x[n + sy]) * inv_hc2;
            v -= (x[n - 1] + x[n + 1]) * inv_ha2;
            out[n] = v;
        }
    }

    double dot(const std::vector<double>& a, const std::vector<double>& b) const {
        double s = 0.0;
        for (int n : interior) s += a[n] * b[n];
        return s;
    }
};

}  // namespace

std::pair<Field, SolveReport> solve_dirichlet(const PoissonProblem& p, const CgOptions& opt) {
    if (opt.tol <= 0.0) throw std::invalid_argument("solve_dirichlet: tol must be positive");
    const Grid& g = p.grid;
    const InteriorOperator A(g);
    const int n_unknowns = static_cast<int>(A.interior.size());
    const int max_iter = opt.max_iter > 0 ? opt.max_iter : 10 * n_unknowns;

    // Boundary data as a full field; the lift moves it into the rhs.
    Field ubc(g);
    p.boundary.apply(ubc);

    std::vector<double> b(g.node_count(), 0.0);
    {
        const int sy = g.n_axial;
        for (int n : A.interior) b[n] = p.rhs.values[n];
        // Contributions of boundary neighbors: +bc/h^2 per adjacent face.
        for (int n : A.interior) {
            double add = 0.0;
            auto lift = [&](int nb, double inv_h2) {
                add += ubc.values[nb] * inv_h2;
            };
            // A neighbor is a boundary node iff its own stencil position says so;
            // reading ubc is zero at interior nodes, so adding all neighbors is exact.
            lift(n - A.stride_x, A.inv_hc2);
            lift(n + A.stride_x, A.inv_hc2);
            if (g.d_cross == 2) {
                lift(n - sy, A.inv_hc2);
                lift(n + sy, A.inv_hc2);
            }
            lift(n - 1, A.inv_ha2);
            lift(n + 1, A.inv_ha2);
            b[n] += add;
        }
    }

    std::vector<double> x(g.node_count(), 0.0);
    if (opt.warm_start != nullptr) {
        if (!(opt.warm_start->grid == g))
            throw std::invalid_argument("solve_dirichlet: warm start grid mismatch");
        for (int n : A.interior) x[n] = opt.warm_start->values[n];
    }

    std::vector<double> r(g.node_count(), 0.0);
    std::vector<double> q(g.node_count(), 0.0);
    A.apply(x, q);
    for (int n : A.interior) r[n] = b[n] - q[n];

    const double bnorm = std::sqrt(A.dot(b, b));
    double rnorm = std::sqrt(A.dot(r, r));
    SolveReport rep;
    rep.tolerance = opt.tol;

    if (bnorm == 0.0) {
        // Zero data: the solution is identically the boundary lift.
        Field u(g);
        p.boundary.apply(u);
        rep.converged = true;
        rep.wall_notes = "zero rhs";
        return {std::move(u), rep};
    }

    std::vector<double> d = r;
    double rs = rnorm * rnorm;
    int k = 0;
    while (rnorm > opt.tol * bnorm) {
        if (k >= max_iter) throw SolveFailure(rnorm / bnorm, k);
        A.apply(d, q);
        const double dq = A.dot(d, q);
        const double alpha = rs / dq;
        for (int n : A.interior) {
            x[n] += alpha * d[n];
            r[n] -= alpha * q[n];
        }
        const double rs_new = A.dot(r, r);
        const double beta = rs_new / rs;
        for (int n : A.interior) d[n] = r[n] + beta * d[n];
        rs = rs_new;
        rnorm = std::sqrt(rs_new);
        ++k;
    }

    Field u(g);
    p.boundary.apply(u);
    for (int n : A.interior) u.values[n] = x[n];
    rep.iterations = k;
    rep.residual_rel = rnorm / bnorm;
    rep.converged = true;
    rep.wall_notes = "cg";
    return {std::move(u), rep};
}

double energy_phi(const ReducedField& f, double cg_tol) {
    const Grid& g = f.grid;
    auto problem = PoissonProblem::with_reduced_rhs(g, f, BoundaryData::zero(g));
    auto [u, rep] = solve_dirichlet(problem, cg_tol);
    const ReducedField v = average_vertical(u);
    return inner_reduced(f, v);
}

}  // namespace cylobs
