#include "cylobs/config.hpp"

#include <json.hpp>

#include <set>

namespace cylobs {

using nlohmann::json;

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::poisson: return "poisson";
        case ProblemKind::rearrangement: return "rearrangement";
        case ProblemKind::obstacle: return "obstacle";
        case ProblemKind::compare: return "compare";
        case ProblemKind::counterexample: return "counterexample";
        case ProblemKind::verify: return "verify";
    }
    return "?";
}

namespace {

ProblemKind parse_problem(const std::string& s) {
    if (s == "poisson") return ProblemKind::poisson;
    if (s == "rearrangement") return ProblemKind::rearrangement;
    if (s == "obstacle") return ProblemKind::obstacle;
    if (s == "compare") return ProblemKind::compare;
    if (s == "counterexample") return ProblemKind::counterexample;
    if (s == "verify") return ProblemKind::verify;
    throw ConfigError("problem", "unknown problem '" + s + "'");
}

double get_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(key, "expected a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ConfigError(key, "expected an integer");
    return j.at(key).get<int>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<document>", "top level must be a JSON object");

    static const std::set<std::string> known = {
        "problem", "d_cross", "n_cross", "n_axial", "mass", "alpha", "alpha1", "alpha2",
        "cg_tol", "gap_tol", "obstacle_tol", "tol_v", "fw_max_iter", "obstacle_max_iter",
        "output_dir"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError(it.key(), "unknown key");

    RunConfig cfg;
    if (!j.contains("problem")) throw ConfigError("problem", "missing required key");
    if (!j.at("problem").is_string()) throw ConfigError("problem", "expected a string");
    cfg.problem = parse_problem(j.at("problem").get<std::string>());

    cfg.d_cross = get_int(j, "d_cross", cfg.d_cross);
    if (cfg.d_cross != 1 && cfg.d_cross != 2) throw ConfigError("d_cross", "must be 1 or 2");
    cfg.n_cross = get_int(j, "n_cross", cfg.n_cross);
    if (cfg.n_cross < 3) throw ConfigError("n_cross", "must be >= 3");
    cfg.n_axial = get_int(j, "n_axial", cfg.n_axial);
    if (cfg.n_axial < 3) throw ConfigError("n_axial", "must be >= 3");

    cfg.mass = get_number(j, "mass", cfg.mass);
    cfg.alpha = get_number(j, "alpha", cfg.alpha);
    cfg.alpha1 = get_number(j, "alpha1", cfg.alpha1);
    cfg.alpha2 = get_number(j, "alpha2", cfg.alpha2);
    cfg.cg_tol = get_number(j, "cg_tol", cfg.cg_tol);
    cfg.gap_tol = get_number(j, "gap_tol", cfg.gap_tol);
    cfg.obstacle_tol = get_number(j, "obstacle_tol", cfg.obstacle_tol);
    cfg.tol_v = get_number(j, "tol_v", cfg.tol_v);
    cfg.fw_max_iter = get_int(j, "fw_max_iter", cfg.fw_max_iter);
    cfg.obstacle_max_iter = get_int(j, "obstacle_max_iter", cfg.obstacle_max_iter);
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }

    if (cfg.cg_tol <= 0.0) throw ConfigError("cg_tol", "must be positive");
    if (cfg.gap_tol <= 0.0) throw ConfigError("gap_tol", "must be positive");
    if (cfg.obstacle_tol <= 0.0) throw ConfigError("obstacle_tol", "must be positive");
    if (cfg.fw_max_iter < 1) throw ConfigError("fw_max_iter", "must be >= 1");
    if (cfg.obstacle_max_iter < 1) throw ConfigError("obstacle_max_iter", "must be >= 1");

    if (cfg.problem == ProblemKind::rearrangement) {
        const double measure = cfg.make_grid().domain_measure();
        if (cfg.mass <= 0.0 || cfg.mass > measure + 1e-12)
            throw ConfigError("mass", "must lie in (0, |D|]");
    }
    if (cfg.problem == ProblemKind::obstacle && cfg.alpha < 0.0)
        throw ConfigError("alpha", "must be nonnegative");
    if (cfg.problem == ProblemKind::compare || cfg.problem == ProblemKind::counterexample) {
        if (cfg.alpha1 <= 0.0) throw ConfigError("alpha1", "must be positive");
        if (cfg.alpha2 < cfg.alpha1) throw ConfigError("alpha1", "requires alpha1 <= alpha2");
    }
    return cfg;
}

std::string RunConfig::canonical_text() const {
    json j;
    j["problem"] = to_string(problem);
    j["d_cross"] = d_cross;
    j["n_cross"] = n_cross;
    j["n_axial"] = n_axial;
    j["mass"] = mass;
    j["alpha"] = alpha;
    j["alpha1"] = alpha1;
    j["alpha2"] = alpha2;
    j["cg_tol"] = cg_tol;
    j["gap_tol"] = gap_tol;
    j["obstacle_tol"] = obstacle_tol;
    j["tol_v"] = tol_v;
    j["fw_max_iter"] = fw_max_iter;
    j["obstacle_max_iter"] = obstacle_max_iter;
    j["output_dir"] = output_dir;
    return j.dump();  // nlohmann::json orders keys lexicographically
}

}  // namespace cylobs
