#include "cylobs/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cylobs {

Density Density::from_values(const Grid& g, std::vector<double> vals, double mass) {
    if (static_cast<int>(vals.size()) != g.cross_count())
        throw std::invalid_argument("Density: value count mismatch");
    double quad = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        double& v = vals[c];
        if (!std::isfinite(v)) throw std::invalid_argument("Density: non-finite value");
        if (v < -1e-10 || v > 1.0 + 1e-10)
            throw std::invalid_argument("Density: value outside [0,1]");
        v = std::clamp(v, 0.0, 1.0);
        quad += v * g.cross_weight(c);
    }
    if (std::abs(quad - mass) > 1e-12 * std::max(1.0, std::abs(mass)))
        throw std::invalid_argument("Density: quadrature does not match stated mass");
    Density f{g, std::move(vals), mass};
    return f;
}

Density bathtub_lmo(const ReducedField& v, double mass) {
    const Grid& g = v.grid;
    const double measure = g.domain_measure();
    if (mass <= 0.0 || mass > measure + 1e-12)
        throw std::invalid_argument("bathtub_lmo: mass out of (0, |D|]");

    std::vector<int> order(g.cross_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v.values[a] < v.values[b]; });

    std::vector<double> f(g.cross_count(), 0.0);
    double remaining = std::min(mass, measure);
    for (int c : order) {
        if (remaining <= 0.0) break;
        const double w = g.cross_weight(c);
        if (w <= remaining) {
            f[c] = 1.0;
            remaining -= w;
        } else {
            f[c] = remaining / w;
            remaining = 0.0;
        }
    }
    // Rebuild the mass from the fill so the Density invariant holds exactly.
    double quad = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) quad += f[c] * g.cross_weight(c);
    return Density::from_values(g, std::move(f), quad);
}

namespace {

Field solve_for_density(const std::vector<double>& vals, const Grid& g, double cg_tol,
                        const Field* warm) {
    ReducedField rhs(g);
    rhs.values = vals;
    auto problem = PoissonProblem::with_reduced_rhs(g, rhs, BoundaryData::zero(g));
    CgOptions opt;
    opt.tol = cg_tol;
    opt.warm_start = warm;
    return solve_dirichlet(problem, opt).first;
}

}  // namespace

RearrangementSolution frank_wolfe(double mass, const Grid& grid, const FrankWolfeOptions& opt) {
    if (opt.gap_tol <= 0.0) throw std::invalid_argument("frank_wolfe: gap_tol must be positive");
    Density f = Density::uniform(grid, mass);

    RearrangementSolution sol(grid);
    sol.gap_tol = opt.gap_tol;
    sol.mass = mass;

    Field u_f(grid);
    Field u_d(grid);
    ReducedField v_f(grid);
    bool have_u_d = false;

    const int nc = grid.cross_count();
    std::vector<double> d(nc, 0.0);

    for (int k = 0; k <= opt.max_iter; ++k) {
        u_f = solve_for_density(f.values, grid, opt.cg_tol, k > 0 ? &u_f : nullptr);
        v_f = average_vertical(u_f);
        const double obj = inner_reduced(f.as_reduced(), v_f);

        const Density f_lmo = bathtub_lmo(v_f, mass);
        double gap = 0.0;
        for (int c = 0; c < nc; ++c) {
            d[c] = f_lmo.values[c] - f.values[c];
            gap -= 2.0 * d[c] * v_f.values[c] * grid.cross_weight(c);
        }
        gap = std::max(gap, 0.0);
        sol.history.push_back({k, obj, gap});

        if (gap <= opt.gap_tol * std::abs(obj)) {
            sol.certified = true;
            break;
        }
        if (k == opt.max_iter) break;

        // Exact line search: Phi(f + t d) is quadratic with slope 2<d, v_f>
        // and curvature 2<d, v_d>.
        u_d = solve_for_density(d, grid, opt.cg_tol, have_u_d ? &u_d : nullptr);
        have_u_d = true;
        const ReducedField v_d = average_vertical(u_d);
        ReducedField d_red(grid);
        d_red.values = d;
        const double slope = inner_reduced(d_red, v_f);
        const double curv = inner_reduced(d_red, v_d);
        double t = 1.0;
        if (curv > 0.0) t = std::clamp(-slope / curv, 0.0, 1.0);

        std::vector<double> next(nc);
        for (int c = 0; c < nc; ++c)
            next[c] = std::clamp((1.0 - t) * f.values[c] + t * f_lmo.values[c], 0.0, 1.0);
        double quad = 0.0;
        for (int c = 0; c < nc; ++c) quad += next[c] * grid.cross_weight(c);
        f = Density::from_values(grid, std::move(next), quad);
    }

    sol.f_hat = std::move(f);
    sol.u_hat = std::move(u_f);
    sol.v_hat = std::move(v_f);
    sol.objective = sol.history.back().objective;
    sol.fw_gap = sol.history.back().gap;
    sol.alpha = *std::max_element(sol.v_hat.values.begin(), sol.v_hat.values.end());
    return sol;
}

StructureReport verify_structure(const RearrangementSolution& sol, double eps, double delta) {
    if (!sol.certified)
        throw std::invalid_argument("verify_structure: solution is not gap-certified");
    const Grid& g = sol.f_hat.grid;
    StructureReport r;
    r.alpha = sol.alpha;
    r.eps = eps;
    r.delta = delta;
    r.full_mass = sol.mass >= g.domain_measure() - 1e-12;

    for (int c = 0; c < g.cross_count(); ++c) {
        const double v = sol.v_hat.values[c];
        const double f = sol.f_hat.values[c];
        r.max_v_minus_alpha = std::max(r.max_v_minus_alpha, v - r.alpha);
        if (v < r.alpha - eps) r.min_f_on_low_v = std::min(r.min_f_on_low_v, f);
        if (f <= 1.0 - delta)
            r.max_vdev_on_fractional = std::max(r.max_vdev_on_fractional, std::abs(v - r.alpha));
        r.min_f = std::min(r.min_f, f);
        if (f > delta && f < 1.0 - delta) r.fractional_measure += g.cross_weight(c);
    }

    r.pass_a = r.max_v_minus_alpha <= eps;
    r.pass_b = r.min_f_on_low_v >= 1.0 - delta;
    r.pass_c = r.max_vdev_on_fractional <= eps;
    r.pass_e = r.full_mass || r.fractional_measure > 0.0;
    return r;
}

}  // namespace cylobs
