#include "cylobs/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>

#include "cylobs/free_boundary.hpp"
#include "cylobs/io.hpp"
#include "cylobs/obstacle.hpp"
#include "cylobs/poisson.hpp"
#include "cylobs/rearrangement.hpp"
#include "cylobs/verify.hpp"

namespace cylobs {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json report_header(const RunConfig& cfg) {
    json j;
    j["problem"] = to_string(cfg.problem);
    j["config_hash"] = hash_hex(cfg.canonical_text());
    j["tolerances"] = {{"cg_tol", cfg.cg_tol},
                       {"gap_tol", cfg.gap_tol},
                       {"obstacle_tol", cfg.obstacle_tol},
                       {"tol_v", cfg.tol_v}};
    return j;
}

void write_report(const json& j, const fs::path& dir) {
    write_text(j.dump(2) + "\n", dir / "report.json");
}

int run_poisson(const RunConfig& cfg, std::ostream& log) {
    const Grid g = cfg.make_grid();
    const ReducedField one = ReducedField::from_function(g, [](double, double = 0.0) { return 1.0; });
    auto prob = PoissonProblem::with_reduced_rhs(g, one, BoundaryData::zero(g));
    auto [u, rep] = solve_dirichlet(prob, cfg.cg_tol);
    const fs::path dir = cfg.output_dir;
    write_csv(u, dir / "u.csv");
    write_csv(average_vertical(u), dir / "v.csv");
    json j = report_header(cfg);
    j["solve"] = {{"iterations", rep.iterations},
                  {"residual_rel", rep.residual_rel},
                  {"tolerance", rep.tolerance}};
    write_report(j, dir);
    std::ostringstream s;
    s << "poisson: unit rhs, zero boundary, " << g.n_cross << "x" << g.n_axial << " grid\n"
      << "cg iterations: " << rep.iterations << ", relative residual: " << rep.residual_rel << "\n";
    write_text(s.str(), dir / "summary.txt");
    log << s.str();
    return exit_ok;
}

int run_rearrangement(const RunConfig& cfg, std::ostream& log) {
    FrankWolfeOptions opt;
    opt.gap_tol = cfg.gap_tol;
    opt.max_iter = cfg.fw_max_iter;
    opt.cg_tol = cfg.cg_tol;
    const RearrangementSolution sol = frank_wolfe(cfg.mass, cfg.make_grid(), opt);
    const fs::path dir = cfg.output_dir;
    write_csv(sol.f_hat.as_reduced(), dir / "f.csv");
    write_csv(sol.v_hat, dir / "v.csv");
    write_csv(sol.u_hat, dir / "u.csv");
    json j = report_header(cfg);
    j["alpha"] = sol.alpha;
    j["fw_gap"] = sol.fw_gap;
    j["objective"] = sol.objective;
    j["iterations"] = sol.history.size() - 1;
    j["certified"] = sol.certified;
    json hist = json::array();
    for (const auto& h : sol.history)
        hist.push_back({{"iteration", h.iteration}, {"objective", h.objective}, {"gap", h.gap}});
    j["history"] = hist;
    write_report(j, dir);
    std::ostringstream s;
    s << "rearrangement: mass " << cfg.mass << ", objective " << sol.objective << ", gap "
      << sol.fw_gap << ", alpha " << sol.alpha << (sol.certified ? " (certified)\n" : " (NOT certified)\n");
    write_text(s.str(), dir / "summary.txt");
    log << s.str();
    return sol.certified ? exit_ok : exit_nonconvergence;
}

ObstacleOptions make_obstacle_opts(const RunConfig& cfg) {
    ObstacleOptions opt;
    opt.tol = cfg.obstacle_tol;
    opt.max_iter = cfg.obstacle_max_iter;
    opt.cg_tol = std::min(cfg.cg_tol, 1e-12);
    opt.tol_v = cfg.tol_v;
    return opt;
}

int run_obstacle(const RunConfig& cfg, std::ostream& log) {
    const Grid g = cfg.make_grid();
    const ObstacleProblem p(g, BoundaryData::constant(g, cfg.alpha));
    const ObstacleSolution sol = solve_obstacle(p, make_obstacle_opts(cfg));
    const fs::path dir = cfg.output_dir;
    write_csv(sol.u, dir / "u.csv");
    write_csv(sol.v, dir / "v.csv");
    json j = report_header(cfg);
    j["alpha"] = cfg.alpha;
    j["J"] = sol.J;
    j["iterations"] = sol.report.iterations;
    j["optimality_residual"] = sol.optimality_residual;
    j["coincidence_measure"] = sol.coincidence_measure;
    j["max_lap_axial_variation"] = sol.max_lap_axial_variation;
    j["certified"] = sol.certified;
    write_report(j, dir);
    std::ostringstream s;
    s << "obstacle: alpha " << cfg.alpha << ", J " << sol.J << ", residual "
      << sol.optimality_residual << ", coincidence measure " << sol.coincidence_measure
      << (sol.certified ? " (certified)\n" : " (NOT certified)\n");
    write_text(s.str(), dir / "summary.txt");
    log << s.str();
    return sol.certified ? exit_ok : exit_nonconvergence;
}

int run_compare(const RunConfig& cfg, std::ostream& log) {
    const ComparisonReport r = compare_v(cfg.alpha1, cfg.alpha2, cfg.make_grid(), make_obstacle_opts(cfg));
    json j = report_header(cfg);
    j["alpha1"] = r.alpha1;
    j["alpha2"] = r.alpha2;
    j["max_v1_minus_v2"] = r.max_v1_minus_v2;
    j["defect_measure"] = r.defect_measure;
    j["deep_defect_count"] = r.deep_defect_count;
    j["coincidence1"] = r.coincidence1;
    j["coincidence2"] = r.coincidence2;
    j["certified"] = r.certified;
    const fs::path dir = cfg.output_dir;
    write_report(j, dir);
    const bool holds = r.max_v1_minus_v2 <= 1e-6 * cfg.alpha2 && r.deep_defect_count == 0;
    std::ostringstream s;
    s << "compare: max(v1 - v2) = " << r.max_v1_minus_v2 << ", deep defects = "
      << r.deep_defect_count << (holds ? " (comparison holds)\n" : " (comparison VIOLATED)\n");
    write_text(s.str(), dir / "summary.txt");
    log << s.str();
    if (!r.certified) return exit_nonconvergence;
    return holds ? exit_ok : exit_check_failure;
}

int run_counterexample(const RunConfig& cfg, std::ostream& log) {
    const CounterexampleReport r =
        comparison_counterexample(cfg.alpha1, cfg.alpha2, cfg.make_grid(), make_obstacle_opts(cfg));
    json j = report_header(cfg);
    j["alpha1"] = r.alpha1;
    j["alpha2"] = r.alpha2;
    j["applicable"] = r.applicable;
    j["max_excess"] = r.max_excess;
    j["argmax"] = {{"x1", r.arg_x1}, {"x2", r.arg_x2}, {"xn", r.arg_xn}};
    j["col_integral_max"] = r.col_integral_max;
    j["coincidence2"] = r.coincidence2;
    j["certified"] = r.certified;
    const fs::path dir = cfg.output_dir;
    write_report(j, dir);
    std::ostringstream s;
    if (r.applicable)
        s << "counterexample: max(u1 - u2) = " << r.max_excess << " on {v2 = 0} at xn = "
          << r.arg_xn << "\n";
    else
        s << "counterexample: not applicable ({v2 = 0} is empty)\n";
    write_text(s.str(), dir / "summary.txt");
    log << s.str();
    return r.certified ? exit_ok : exit_nonconvergence;
}

int run_verify_cmd(const RunConfig& cfg, std::ostream& log) {
    const VerifyResult result = run_verify(cfg);
    const std::string summary = render_summary(result);
    const fs::path dir = cfg.output_dir;
    json j = report_header(cfg);
    json stages = json::array();
    for (const auto& s : result.stages)
        stages.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
    j["stages"] = stages;
    j["all_pass"] = result.all_pass();
    write_report(j, dir);
    write_text(summary, dir / "summary.txt");
    log << summary;
    return result.all_pass() ? exit_ok : exit_check_failure;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.problem) {
        case ProblemKind::poisson: return run_poisson(cfg, log);
        case ProblemKind::rearrangement: return run_rearrangement(cfg, log);
        case ProblemKind::obstacle: return run_obstacle(cfg, log);
        case ProblemKind::compare: return run_compare(cfg, log);
        case ProblemKind::counterexample: return run_counterexample(cfg, log);
        case ProblemKind::verify: return run_verify_cmd(cfg, log);
    }
    return exit_validation;
}

}  // namespace cylobs
