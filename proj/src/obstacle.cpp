#include "cylobs/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cylobs {

namespace {

double chi_interval_distance(double lap, double v, double tol_v) {
    const double lo = v > tol_v ? 1.0 : 0.0;
    const double hi = v >= -tol_v ? 1.0 : 0.0;
    return std::max({lo - lap, lap - hi, 0.0});
}

struct Workspace {
    const Grid& g;
    std::vector<int> interior_cols;
    std::vector<std::uint8_t> is_interior_col;
    double w_int;      // full tensor cell measure
    double lap_lmax;   // largest eigenvalue of -Lap_h
    int m_ax;          // interior nodes per column
    double a_norm2;    // squared norm of the interior trapezoid weights

    explicit Workspace(const Grid& grid) : g(grid) {
        is_interior_col.assign(g.cross_count(), 0);
        for (int c = 0; c < g.cross_count(); ++c)
            if (!g.cross_on_boundary(c)) {
                interior_cols.push_back(c);
                is_interior_col[c] = 1;
            }
        w_int = std::pow(g.h_cross, g.d_cross) * g.h_axial;
        auto axis_lmax = [](double h) {
            const double c = std::cos(0.5 * std::numbers::pi * h);
            return 4.0 / (h * h) * c * c;
        };
        lap_lmax = g.d_cross * axis_lmax(g.h_cross) + axis_lmax(g.h_axial);
        m_ax = g.n_axial - 2;
        a_norm2 = m_ax * g.h_axial * g.h_axial;
    }
};

double objective(const Field& u, const Grid& g) {
    const ReducedField v = average_vertical(u);
    double pos = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) pos += std::max(0.0, v.values[c]) * g.cross_weight(c);
    return dirichlet_energy(u) + 2.0 * pos;
}

/// One proximal-gradient step with the column prox, in place.
void prox_grad_step(Field& z, const Field& y, const Workspace& ws, double step) {
    const Grid& g = ws.g;
    const Field lap = apply_laplacian(y);
    z = y;
    for (int c : ws.interior_cols) {
        const int base = g.node_index(c, 0);
        for (int j = 1; j < g.n_axial - 1; ++j)
            z.values[base + j] += step * 2.0 * ws.w_int * lap.values[base + j];
    }
    // Column prox of t * kappa * (a.u + b)^+ via the affine-composition rule.
    for (int c : ws.interior_cols) {
        const int base = g.node_index(c, 0);
        double s = 0.5 * g.h_axial * (z.values[base] + z.values[base + g.n_axial - 1]);
        for (int j = 1; j < g.n_axial - 1; ++j) s += g.h_axial * z.values[base + j];
        const double kappa = 2.0 * g.cross_weight(c);
        const double tau = ws.a_norm2 * step * kappa;
        double s_new;
        if (s > tau)
            s_new = s - tau;
        else if (s >= 0.0)
            s_new = 0.0;
        else
            s_new = s;
        if (s_new != s) {
            const double shift = (s_new - s) / (ws.m_ax * g.h_axial);
            for (int j = 1; j < g.n_axial - 1; ++j) z.values[base + j] += shift;
        }
    }
}

Field initial_guess(const ObstacleProblem& p, ObstacleOptions::Init init) {
    Field u(p.grid);
    if (init == ObstacleOptions::Init::affine) {
        for (int c = 0; c < p.grid.cross_count(); ++c)
            for (int j = 0; j < p.grid.n_axial; ++j) {
                const double t = p.grid.xn(j);
                u.at(c, j) = (1.0 - t) * p.boundary.bottom + t * p.boundary.top;
            }
    }
    p.boundary.apply(u);
    return u;
}

struct KktResult {
    Field u;
    std::vector<double> lambda;  // per active column, aligned with `active` order
    int schur_iterations = 0;
    int poisson_solves = 0;
};

/// Solve the frozen-active-set problem: Lap u = 1 on inactive interior
/// columns, vertical average zero on active columns (multiplier lambda =
/// column Laplacian there). Matrix-free Schur complement in lambda,
/// preconditioned with the reduced Laplacian restricted to the active set.
KktResult solve_kkt(const ObstacleProblem& p, const Workspace& ws,
                    const std::vector<int>& active, double cg_tol, const Field* warm) {
    const Grid& g = p.grid;
    ReducedField rhs_base(g);
    for (int c : ws.interior_cols) rhs_base.values[c] = -1.0;
    for (int c : active) rhs_base.values[c] = 0.0;

    KktResult res{Field(g), {}, 0, 0};
    auto base_problem = PoissonProblem::with_reduced_rhs(g, rhs_base, p.boundary);
    CgOptions copt;
    copt.tol = cg_tol;
    copt.warm_start = warm;
    Field u_base = solve_dirichlet(base_problem, copt).first;
    ++res.poisson_solves;

    if (active.empty()) {
        res.u = std::move(u_base);
        return res;
    }

    const ReducedField v_base = average_vertical(u_base);
    const int na = static_cast<int>(active.size());
    std::vector<int> active_pos(g.cross_count(), -1);
    for (int i = 0; i < na; ++i) active_pos[active[i]] = i;

    // K lambda = A L^{-1} E lambda restricted to the active set (SPD).
    auto matvec = [&](const std::vector<double>& lam, std::vector<double>& out) {
        ReducedField ext(g);
        for (int i = 0; i < na; ++i) ext.values[active[i]] = lam[i];
        auto prob = PoissonProblem::with_reduced_rhs(g, ext, BoundaryData::zero(g));
        Field w = solve_dirichlet(prob, cg_tol).first;
        ++res.poisson_solves;
        const ReducedField vw = average_vertical(w);
        for (int i = 0; i < na; ++i) out[i] = vw.values[active[i]];
    };
    // Preconditioner: reduced Laplacian with zero Dirichlet off the active set.
    const double inv_h2 = 1.0 / (g.h_cross * g.h_cross);
    auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
        for (int i = 0; i < na; ++i) {
            const int c = active[i];
            const int ix = g.cross_ix(c), iy = g.cross_iy(c);
            double acc = 2.0 * g.d_cross * inv_h2 * r[i];
            auto nb = [&](int cx, int cy) {
                const int pos = active_pos[g.cross_index(cx, cy)];
                if (pos >= 0) acc -= inv_h2 * r[pos];
            };
            nb(ix - 1, iy);
            nb(ix + 1, iy);
            if (g.d_cross == 2) {
                nb(ix, iy - 1);
                nb(ix, iy + 1);
            }
            z[i] = acc;
        }
    };

    std::vector<double> lam(na, 0.0), r(na), z(na), d(na), q(na);
    for (int i = 0; i < na; ++i) r[i] = v_base.values[active[i]];
    const double rhs_norm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    if (rhs_norm > 0.0) {
        precond(r, z);
        d = z;
        double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const double schur_tol = 1e-11;
        const int schur_cap = 2000;
        for (int it = 0; it < schur_cap; ++it) {
            const double rnorm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
            if (rnorm <= schur_tol * rhs_norm) break;
            matvec(d, q);
            const double dq = std::inner_product(d.begin(), d.end(), q.begin(), 0.0);
            if (dq <= 0.0) break;
            const double alpha = rz / dq;
            for (int i = 0; i < na; ++i) {
                lam[i] += alpha * d[i];
                r[i] -= alpha * q[i];
            }
            precond(r, z);
            const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
            const double beta = rz_new / rz;
            for (int i = 0; i < na; ++i) d[i] = z[i] + beta * d[i];
            rz = rz_new;
            ++res.schur_iterations;
        }
    }

    ReducedField rhs_full = rhs_base;
    for (int i = 0; i < na; ++i) rhs_full.values[active[i]] = -lam[i];
    auto full_problem = PoissonProblem::with_reduced_rhs(g, rhs_full, p.boundary);
    CgOptions fopt;
    fopt.tol = cg_tol;
    fopt.warm_start = &u_base;
    res.u = solve_dirichlet(full_problem, fopt).first;
    ++res.poisson_solves;
    res.lambda = std::move(lam);
    return res;
}

}  // namespace

ObstacleProblem::ObstacleProblem(const Grid& g, BoundaryData bc) : grid(g), boundary(std::move(bc)) {
    boundary.validate(g);
    for (int c = 0; c < g.cross_count(); ++c) {
        if (!g.cross_on_boundary(c)) continue;
        for (int j = 0; j < g.n_axial; ++j) {
            const double val = boundary.lateral[g.node_index(c, j)];
            const double t = g.xn(j);
            const double cap = (1.0 - t) * boundary.bottom + t * boundary.top;
            if (val < -1e-12 || val > cap + 1e-12)
                throw std::invalid_argument(
                    "ObstacleProblem: boundary data violates 0 <= g <= (1-xn) g0 + xn g1");
        }
    }
}

double ObstacleProblem::boundary_scale() const {
    double s = std::max(std::abs(boundary.bottom), std::abs(boundary.top));
    for (int c = 0; c < grid.cross_count(); ++c)
        if (grid.cross_on_boundary(c))
            for (int j = 0; j < grid.n_axial; ++j)
                s = std::max(s, std::abs(boundary.lateral[grid.node_index(c, j)]));
    return s;
}

ObstacleSolution solve_obstacle(const ObstacleProblem& p, const ObstacleOptions& opt) {
    if (opt.tol <= 0.0) throw std::invalid_argument("solve_obstacle: tol must be positive");
    const Grid& g = p.grid;
    const Workspace ws(g);
    const double tol_v = opt.tol_v > 0.0 ? opt.tol_v : 1e-6 * std::max(p.boundary_scale(), 1.0);

    // Accelerated proximal gradient with function-value restarts.
    const double step = 1.0 / (2.0 * ws.w_int * ws.lap_lmax);
    Field u = initial_guess(p, opt.init);
    Field u_prev = u;
    Field y = u;
    Field z(g);
    double theta = 1.0;
    double J_prev = objective(u, g);
    double J_best = J_prev;
    Field u_best = u;
    int fista_iters = 0;
    double window_best = J_best;
    for (int k = 1; k <= opt.max_iter; ++k) {
        prox_grad_step(z, y, ws, step);
        std::swap(u_prev, u);
        u = z;
        const double J = objective(u, g);
        if (J < J_best) {
            J_best = J;
            u_best = u;
        }
        if (J > J_prev) {
            theta = 1.0;
            y = u;
        } else {
            const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
            const double mom = (theta - 1.0) / theta_next;
            y = u;
            for (int c : ws.interior_cols) {
                const int base = g.node_index(c, 0);
                for (int j = 1; j < g.n_axial - 1; ++j)
                    y.values[base + j] += mom * (u.values[base + j] - u_prev.values[base + j]);
            }
            theta = theta_next;
        }
        J_prev = J;
        fista_iters = k;
        if (k % 100 == 0) {
            if (window_best - J_best <= 1e-13 * std::max(1.0, std::abs(J_best))) break;
            window_best = J_best;
        }
    }
    u = u_best;

    // Active-set polish: exact complementarity on the frozen mask, iterated
    // with release/add adjustments until a fixed point.
    int polish_rounds = 0;
    int poisson_solves = 0;
    if (opt.polish) {
        ReducedField v = average_vertical(u);
        std::vector<std::uint8_t> active_mask(g.cross_count(), 0);
        for (int c : ws.interior_cols) active_mask[c] = v.values[c] <= tol_v ? 1 : 0;
        Field u_polish = u;
        bool valid = false;
        const Field* warm = &u;
        for (int round = 0; round < 50; ++round) {
            std::vector<int> active;
            for (int c : ws.interior_cols)
                if (active_mask[c]) active.push_back(c);
            KktResult kkt = solve_kkt(p, ws, active, opt.cg_tol, warm);
            poisson_solves += kkt.poisson_solves;
            ++polish_rounds;
            const ReducedField v_new = average_vertical(kkt.u);
            bool changed = false;
            for (size_t i = 0; i < active.size(); ++i) {
                if (kkt.lambda[i] < -1e-9 || kkt.lambda[i] > 1.0 + 1e-9) {
                    active_mask[active[i]] = 0;
                    changed = true;
                }
            }
            for (int c : ws.interior_cols) {
                if (!active_mask[c] && v_new.values[c] < -1e-12 * std::max(1.0, p.boundary_scale())) {
                    active_mask[c] = 1;
                    changed = true;
                }
            }
            u_polish = kkt.u;
            warm = &u_polish;
            if (!changed) {
                valid = true;
                break;
            }
        }
        if (valid) {
            const double J_polish = objective(u_polish, g);
            if (J_polish <= J_best + 1e-12 * std::max(1.0, std::abs(J_best))) {
                u = std::move(u_polish);
                J_best = J_polish;
            }
        }
    }

    // Assemble the solution and its certificate from the final field only.
    ObstacleSolution sol(g);
    sol.u = std::move(u);
    sol.v = average_vertical(sol.u);
    sol.tol_v = tol_v;
    sol.J = J_best;

    const Field lap = apply_laplacian(sol.u);
    double min_v = std::numeric_limits<double>::infinity();
    double resid = 0.0;
    double axial_var = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        if (!ws.is_interior_col[c]) continue;
        const int base = g.node_index(c, 0);
        double mean = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int j = 1; j < g.n_axial - 1; ++j) {
            const double L = lap.values[base + j];
            mean += L;
            lo = std::min(lo, L);
            hi = std::max(hi, L);
        }
        mean /= ws.m_ax;
        sol.laplacian_u.values[c] = mean;
        axial_var = std::max(axial_var, hi - lo);
        resid = std::max(resid, chi_interval_distance(mean, sol.v.values[c], tol_v));
    }
    for (int c = 0; c < g.cross_count(); ++c) min_v = std::min(min_v, sol.v.values[c]);

    sol.min_v = min_v;
    sol.optimality_residual = resid;
    sol.max_lap_axial_variation = axial_var;
    sol.coincidence.assign(g.cross_count(), 0);
    for (int c = 0; c < g.cross_count(); ++c)
        if (sol.v.values[c] <= tol_v) {
            sol.coincidence[c] = 1;
            sol.coincidence_measure += g.cross_weight(c);
        }
    sol.certified = resid <= opt.tol && min_v >= -tol_v;
    sol.report.iterations = fista_iters;
    sol.report.residual_rel = resid;
    sol.report.tolerance = opt.tol;
    sol.report.converged = sol.certified;
    sol.report.wall_notes = "apg+" + std::to_string(polish_rounds) + " polish rounds, " +
                            std::to_string(poisson_solves) + " inner solves";
    return sol;
}

double reduced_residual(const ObstacleSolution& sol) {
    if (!sol.certified) throw std::invalid_argument("reduced_residual: solution not certified");
    const Grid& g = sol.u.grid;
    const ReducedField tb = normal_trace(sol.u, Face::bottom);
    const ReducedField tt = normal_trace(sol.u, Face::top);
    const ReducedField lap_v = reduced_laplacian(sol.v);

    // Skip nodes whose one-cell neighborhood straddles the free boundary.
    auto status = [&](int c) { return sol.v.values[c] > sol.tol_v; };
    double res = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        if (g.cross_on_boundary(c)) continue;
        const int ix = g.cross_ix(c), iy = g.cross_iy(c);
        const bool s = status(c);
        bool near_fb = status(g.cross_index(ix - 1, iy)) != s || status(g.cross_index(ix + 1, iy)) != s;
        if (g.d_cross == 2)
            near_fb = near_fb || status(g.cross_index(ix, iy - 1)) != s ||
                      status(g.cross_index(ix, iy + 1)) != s;
        if (near_fb) continue;
        const double h_coeff = 1.0 - tb.values[c] - tt.values[c];
        const double rhs = s ? h_coeff : 0.0;
        res = std::max(res, std::abs(lap_v.values[c] - rhs));
    }
    return res;
}

ComparisonReport compare_v(double alpha1, double alpha2, const Grid& grid,
                           const ObstacleOptions& opt) {
    if (!(0.0 < alpha1 && alpha1 <= alpha2))
        throw std::invalid_argument("compare_v: need 0 < alpha1 <= alpha2");
    const ObstacleProblem p1(grid, BoundaryData::constant(grid, alpha1));
    const ObstacleProblem p2(grid, BoundaryData::constant(grid, alpha2));
    const ObstacleSolution s1 = solve_obstacle(p1, opt);
    const ObstacleSolution s2 = solve_obstacle(p2, opt);

    ComparisonReport rep;
    rep.alpha1 = alpha1;
    rep.alpha2 = alpha2;
    rep.certified = s1.certified && s2.certified;
    rep.coincidence1 = s1.coincidence_measure;
    rep.coincidence2 = s2.coincidence_measure;
    double max_diff = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < grid.cross_count(); ++c)
        max_diff = std::max(max_diff, s1.v.values[c] - s2.v.values[c]);
    rep.max_v1_minus_v2 = max_diff;

    // Nesting defect {v2 = 0} \ {v1 = 0}; a defect node deeper than one cell
    // inside the v2 coincidence set counts as a genuine violation.
    for (int c = 0; c < grid.cross_count(); ++c) {
        if (!(s2.coincidence[c] && !s1.coincidence[c])) continue;
        rep.defect_measure += grid.cross_weight(c);
        if (grid.cross_on_boundary(c)) continue;
        const int ix = grid.cross_ix(c), iy = grid.cross_iy(c);
        bool near_band = !s2.coincidence[grid.cross_index(ix - 1, iy)] ||
                         !s2.coincidence[grid.cross_index(ix + 1, iy)];
        if (grid.d_cross == 2)
            near_band = near_band || !s2.coincidence[grid.cross_index(ix, iy - 1)] ||
                        !s2.coincidence[grid.cross_index(ix, iy + 1)];
        if (!near_band) ++rep.deep_defect_count;
    }
    return rep;
}

CounterexampleReport comparison_counterexample(double alpha1, double alpha2, const Grid& grid,
                                               const ObstacleOptions& opt) {
    if (!(0.0 < alpha1 && alpha1 <= alpha2))
        throw std::invalid_argument("comparison_counterexample: need 0 < alpha1 <= alpha2");
    const ObstacleProblem p1(grid, BoundaryData::constant(grid, alpha1));
    const ObstacleProblem p2(grid, BoundaryData::constant(grid, alpha2));
    const ObstacleSolution s1 = solve_obstacle(p1, opt);
    const ObstacleSolution s2 = solve_obstacle(p2, opt);

    CounterexampleReport rep;
    rep.alpha1 = alpha1;
    rep.alpha2 = alpha2;
    rep.certified = s1.certified && s2.certified;
    rep.coincidence2 = s2.coincidence_measure;

    bool any = false;
    double excess = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < grid.cross_count(); ++c) {
        if (grid.cross_on_boundary(c) || !s2.coincidence[c]) continue;
        any = true;
        rep.col_integral_max =
            std::max({rep.col_integral_max, std::abs(s1.v.values[c]), std::abs(s2.v.values[c])});
        for (int j = 0; j < grid.n_axial; ++j) {
            const double diff = s1.u.at(c, j) - s2.u.at(c, j);
            if (diff > excess) {
                excess = diff;
                rep.arg_x1 = grid.x1(c);
                rep.arg_x2 = grid.x2(c);
                rep.arg_xn = grid.xn(j);
            }
        }
    }
    rep.applicable = any;
    rep.max_excess = any ? excess : 0.0;
    return rep;
}

double second_difference_diagnostic(const ObstacleSolution& sol, int margin_cells) {
    if (margin_cells < 2)
        throw std::invalid_argument("second_difference_diagnostic: margin must be >= 2 cells");
    const Grid& g = sol.u.grid;
    if (margin_cells >= (g.n_cross - 1) / 2)
        throw std::invalid_argument("second_difference_diagnostic: margin leaves no interior");
    const double cell = std::pow(g.h_cross, g.d_cross) * g.h_axial;
    const int n_axes = g.d_cross + 1;
    const int stride_x = (g.d_cross == 1 ? 1 : g.n_cross) * g.n_axial;
    const int stride_y = g.n_axial;

    auto stride_of = [&](int axis) { return axis == 0 ? stride_x : (axis == n_axes - 1 ? 1 : stride_y); };
    auto spacing_of = [&](int axis) { return axis == n_axes - 1 ? g.h_axial : g.h_cross; };

    double sum = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        const int ix = g.cross_ix(c), iy = g.cross_iy(c);
        if (ix < margin_cells || ix > g.n_cross - 1 - margin_cells) continue;
        if (g.d_cross == 2 && (iy < margin_cells || iy > g.n_cross - 1 - margin_cells)) continue;
        for (int j = 1; j < g.n_axial - 1; ++j) {
            const int n = g.node_index(c, j);
            const double* p = sol.u.values.data();
            double node_sum = 0.0;
            for (int a = 0; a < n_axes; ++a) {
                const int sa = stride_of(a);
                const double ha = spacing_of(a);
                const double dd = (p[n + sa] - 2.0 * p[n] + p[n - sa]) / (ha * ha);
                node_sum += dd * dd;
                for (int b = a + 1; b < n_axes; ++b) {
                    const int sb = stride_of(b);
                    const double hb = spacing_of(b);
                    const double dm =
                        (p[n + sa + sb] - p[n + sa - sb] - p[n - sa + sb] + p[n - sa - sb]) /
                        (4.0 * ha * hb);
                    node_sum += 2.0 * dm * dm;
                }
            }
            sum += node_sum * cell;
        }
    }
    return std::sqrt(sum);
}

}  // namespace cylobs
