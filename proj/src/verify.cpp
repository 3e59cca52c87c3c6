#include "cylobs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cylobs/free_boundary.hpp"
#include "cylobs/obstacle.hpp"
#include "cylobs/operators.hpp"
#include "cylobs/poisson.hpp"
#include "cylobs/rearrangement.hpp"

namespace cylobs {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

/// Deterministic density pattern with values in [0,1].
double density_pattern(double x1, double x2) {
    return 0.5 + 0.5 * std::sin(12.9898 * x1 + 7.233 * x2 + 0.5);
}

Grid refined(const Grid& g) { return Grid(g.d_cross, 2 * g.n_cross - 1, 2 * g.n_axial - 1); }

double mms_max_error(const Grid& g, double cg_tol) {
    Field rhs = Field::from_function(
        g, [](double x, double t) { return 2.0 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * t); });
    auto prob = PoissonProblem::with_field_rhs(g, std::move(rhs), BoundaryData::zero(g));
    auto [u, rep] = solve_dirichlet(prob, cg_tol);
    double err = 0.0;
    for (int c = 0; c < g.cross_count(); ++c)
        for (int j = 0; j < g.n_axial; ++j)
            err = std::max(err, std::abs(u.at(c, j) - std::sin(kPi * g.x1(c)) * std::sin(kPi * g.xn(j))));
    return err;
}

StageResult stage_poisson_mms(const RunConfig& cfg) {
    const Grid g1(1, cfg.n_cross, cfg.n_cross);
    const Grid g2 = refined(g1);
    const double e1 = mms_max_error(g1, cfg.cg_tol);
    const double e2 = mms_max_error(g2, cfg.cg_tol);
    const double ratio = e1 / e2;
    const bool pass = ratio >= 3.5 && ratio <= 4.5;
    return {"poisson-mms", pass, "error ratio h/h2 = " + fmt(ratio) + " (want [3.5,4.5])"};
}

StageResult stage_energy_identity(const RunConfig& cfg) {
    Grid g = cfg.make_grid();
    double prev = -1.0;
    bool decreasing = true;
    double rel = 0.0;
    std::string seq;
    for (int level = 0; level < 3; ++level) {
        const ReducedField f = ReducedField::from_function(
            g, [](double x1, double x2 = 0.0) { return density_pattern(x1, x2); });
        const double tol = std::min(cfg.cg_tol, 1e-5 * g.h_cross * g.h_cross * g.h_cross);
        auto prob = PoissonProblem::with_reduced_rhs(g, f, BoundaryData::zero(g));
        auto [u, rep] = solve_dirichlet(prob, tol);
        const double phi = inner_reduced(f, average_vertical(u));
        const double err = std::abs(phi - dirichlet_energy(u));
        rel = err / std::abs(phi);
        seq += (level ? ", " : "") + fmt(err);
        if (prev >= 0.0 && err > prev) decreasing = false;
        prev = err;
        if (level < 2) g = refined(g);
    }
    const bool pass = decreasing && rel <= 1e-2;
    return {"energy-identity", pass,
            "errors [" + seq + "] decreasing=" + (decreasing ? "yes" : "no") +
                ", final rel=" + fmt(rel)};
}

StageResult stage_symmetry(const RunConfig& cfg) {
    const Grid g = cfg.make_grid();
    const ReducedField f = ReducedField::from_function(
        g, [](double x1, double x2 = 0.0) { return density_pattern(x1, x2); });
    auto prob = PoissonProblem::with_reduced_rhs(g, f, BoundaryData::constant(g, 0.3));
    auto [u, rep] = solve_dirichlet(prob, cfg.cg_tol);
    double defect = 0.0;
    for (int c = 0; c < g.cross_count(); ++c)
        for (int j = 0; j < g.n_axial; ++j)
            defect = std::max(defect, std::abs(u.at(c, j) - u.at(c, g.n_axial - 1 - j)));
    const double bound = 1e-8 * max_abs(u);
    return {"symmetry", defect <= bound,
            "max |u(x',xn) - u(x',1-xn)| = " + fmt(defect) + " (bound " + fmt(bound) + ")"};
}

StageResult stage_frank_wolfe(const RunConfig& cfg, RearrangementSolution& out) {
    FrankWolfeOptions opt;
    opt.gap_tol = cfg.gap_tol;
    opt.max_iter = cfg.fw_max_iter;
    opt.cg_tol = cfg.cg_tol;
    out = frank_wolfe(cfg.mass, cfg.make_grid(), opt);
    const bool pass = out.certified;
    return {"frank-wolfe", pass,
            "gap = " + fmt(out.fw_gap) + ", objective = " + fmt(out.objective) + ", iterations = " +
                std::to_string(out.history.size() - 1) + (pass ? " (certified)" : " (NOT certified)")};
}

StageResult stage_structure(const RearrangementSolution& fw) {
    if (!fw.certified) return {"structure", false, "skipped: rearrangement run not certified"};
    const double eps = 1e-3 * fw.alpha;
    const double delta = 1e-3;
    const StructureReport r = verify_structure(fw, eps, delta);
    return {"structure", r.pass(),
            "alpha = " + fmt(r.alpha) + ", (a) " + (r.pass_a ? "ok" : "FAIL") + ", (b) min f = " +
                fmt(r.min_f_on_low_v) + (r.pass_b ? " ok" : " FAIL") + ", (c) dev = " +
                fmt(r.max_vdev_on_fractional) + (r.pass_c ? " ok" : " FAIL") +
                ", (e) fractional measure = " + fmt(r.fractional_measure) +
                (r.pass_e ? " ok" : " FAIL") + ", min f = " + fmt(r.min_f)};
}

ObstacleOptions obstacle_opts(const RunConfig& cfg) {
    ObstacleOptions opt;
    opt.tol = cfg.obstacle_tol;
    opt.max_iter = cfg.obstacle_max_iter;
    opt.cg_tol = std::min(cfg.cg_tol, 1e-12);
    opt.tol_v = cfg.tol_v;
    return opt;
}

StageResult stage_obstacle_invariants(const RunConfig& cfg, ObstacleSolution& out) {
    const Grid g = cfg.make_grid();
    const ObstacleProblem p(g, BoundaryData::constant(g, cfg.alpha));
    ObstacleOptions opt = obstacle_opts(cfg);
    out = solve_obstacle(p, opt);
    ObstacleOptions opt2 = opt;
    opt2.init = ObstacleOptions::Init::zero_interior;
    const ObstacleSolution other = solve_obstacle(p, opt2);
    double init_diff = 0.0;
    for (int n = 0; n < g.node_count(); ++n)
        init_diff = std::max(init_diff, std::abs(out.u.values[n] - other.u.values[n]));

    const double tol_lap = 1e-4;
    bool pass = out.certified && other.certified;
    pass = pass && out.min_v >= -out.tol_v;
    pass = pass && out.max_lap_axial_variation <= tol_lap;
    pass = pass && init_diff <= 10.0 * cfg.obstacle_tol;
    double lap_lo = 0.0, lap_hi = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        if (g.cross_on_boundary(c)) continue;
        lap_lo = std::min(lap_lo, out.laplacian_u.values[c]);
        lap_hi = std::max(lap_hi, out.laplacian_u.values[c]);
        if (out.v.values[c] > out.tol_v)
            pass = pass && out.laplacian_u.values[c] >= 1.0 - tol_lap;
    }
    pass = pass && lap_lo >= -tol_lap && lap_hi <= 1.0 + tol_lap;
    return {"obstacle-invariants", pass,
            "residual = " + fmt(out.optimality_residual) + ", min v = " + fmt(out.min_v) +
                ", lap in [" + fmt(lap_lo) + ", " + fmt(lap_hi) + "], axial var = " +
                fmt(out.max_lap_axial_variation) + ", init diff = " + fmt(init_diff) +
                ", coincidence = " + fmt(out.coincidence_measure)};
}

StageResult stage_cross_check(const RunConfig& cfg, const RearrangementSolution& fw) {
    if (!fw.certified) return {"cross-check", false, "skipped: rearrangement run not certified"};
    const Grid g = cfg.make_grid();
    const ObstacleProblem p(g, BoundaryData::constant(g, fw.alpha));
    const ObstacleSolution obs = solve_obstacle(p, obstacle_opts(cfg));
    double diff = 0.0;
    for (int c = 0; c < g.cross_count(); ++c)
        for (int j = 0; j < g.n_axial; ++j)
            diff = std::max(diff, std::abs((fw.alpha - fw.u_hat.at(c, j)) - obs.u.at(c, j)));
    const double bound = 1e-3 * fw.alpha;
    return {"cross-check", obs.certified && diff <= bound,
            "max |(alpha - u_hat) - u_obstacle| = " + fmt(diff) + " (bound " + fmt(bound) + ")"};
}

StageResult stage_comparison(const RunConfig& cfg) {
    const Grid g = cfg.make_grid();
    const ObstacleOptions opt = obstacle_opts(cfg);
    // Pairs spanning empty, partial, and full coincidence regimes.
    const std::pair<double, double> pairs[] = {
        {0.5 * cfg.alpha, cfg.alpha}, {cfg.alpha, 6.0 * cfg.alpha}, {6.0 * cfg.alpha, 9.0 * cfg.alpha}};
    bool pass = true;
    std::string detail;
    for (const auto& [a1, a2] : pairs) {
        const ComparisonReport r = compare_v(a1, a2, g, opt);
        const bool ok = r.certified && r.max_v1_minus_v2 <= 1e-6 * a2 && r.deep_defect_count == 0;
        pass = pass && ok;
        detail += "(" + fmt(a1) + "," + fmt(a2) + "): max(v1-v2) = " + fmt(r.max_v1_minus_v2) +
                  ", deep defects = " + std::to_string(r.deep_defect_count) + (ok ? " ok; " : " FAIL; ");
    }
    return {"comparison-v", pass, detail};
}

StageResult stage_counterexample(const RunConfig& cfg) {
    const Grid g = cfg.make_grid();
    const ObstacleOptions opt = obstacle_opts(cfg);
    // Logarithmic ladder: shrink alpha2 until the coincidence set of v2 shows up.
    for (double a2 = 8.0 * cfg.alpha; a2 > 1e-4 * cfg.alpha; a2 *= 0.5) {
        const CounterexampleReport r = comparison_counterexample(0.5 * a2, a2, g, opt);
        if (!r.applicable) continue;
        const double threshold = 1e3 * cfg.obstacle_tol;
        const bool pass = r.certified && r.max_excess > threshold &&
                          r.col_integral_max <= 1e-6 * a2;
        return {"counterexample-u", pass,
                "alpha = (" + fmt(r.alpha1) + "," + fmt(r.alpha2) + "), excess = " +
                    fmt(r.max_excess) + " at xn = " + fmt(r.arg_xn) + ", col integrals <= " +
                    fmt(r.col_integral_max) + (pass ? "" : " FAIL")};
    }
    return {"counterexample-u", false, "no configuration with nonempty {v2 = 0} found"};
}

StageResult stage_free_boundary(const RunConfig& cfg, const ObstacleSolution& obs) {
    if (!obs.certified) return {"free-boundary", false, "skipped: obstacle run not certified"};
    if (obs.coincidence_measure == 0.0)
        return {"free-boundary", false, "empty coincidence set at alpha = " + fmt(cfg.alpha)};
    const Grid& g = obs.u.grid;
    const double radii[] = {2.0 * g.h_cross, 4.0 * g.h_cross, 8.0 * g.h_cross};
    const FreeBoundaryReport rep = analyze_free_boundary(obs, radii);
    bool ratios_ok = true;
    for (const auto& node : rep.nodes)
        for (const auto& [r, ratio] : node.density_ratios)
            ratios_ok = ratios_ok && ratio >= 0.0 && ratio <= 1.0;
    const bool pass = ratios_ok && rep.min_h >= -1e-6;
    return {"free-boundary", pass,
            std::to_string(rep.nodes.size()) + " fb nodes, min h = " + fmt(rep.min_h) +
                ", ratios in [0,1]: " + (ratios_ok ? "yes" : "no")};
}

}  // namespace

VerifyResult run_verify(const RunConfig& cfg) {
    VerifyResult result;
    RearrangementSolution fw(cfg.make_grid());
    ObstacleSolution obs(cfg.make_grid());
    result.stages.push_back(stage_poisson_mms(cfg));
    result.stages.push_back(stage_energy_identity(cfg));
    result.stages.push_back(stage_symmetry(cfg));
    result.stages.push_back(stage_frank_wolfe(cfg, fw));
    result.stages.push_back(stage_structure(fw));
    result.stages.push_back(stage_obstacle_invariants(cfg, obs));
    result.stages.push_back(stage_cross_check(cfg, fw));
    result.stages.push_back(stage_comparison(cfg));
    result.stages.push_back(stage_counterexample(cfg));
    result.stages.push_back(stage_free_boundary(cfg, obs));
    return result;
}

std::string render_summary(const VerifyResult& r) {
    std::ostringstream os;
    for (const auto& s : r.stages)
        os << (s.pass ? "PASS" : "FAIL") << "  " << s.name << ": " << s.detail << '\n';
    os << (r.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
    return os.str();
}

}  // namespace cylobs
