#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cylobs/config.hpp"
#include "cylobs/poisson.hpp"
#include "cylobs/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int dispatch(const std::string& command, const std::string& config_path, const std::string& out_dir) {
    using namespace cylobs;
    RunConfig cfg;
    try {
        cfg = parse_config(read_file(config_path));
        if (to_string(cfg.problem) != command)
            throw ConfigError("problem", "config says '" + to_string(cfg.problem) +
                                             "' but the command is '" + command + "'");
        if (!out_dir.empty()) cfg.output_dir = out_dir;
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
    try {
        return run(cfg, std::cout);
    } catch (const SolveFailure& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return exit_nonconvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and verification toolkit for the cylinder rearrangement "
                 "and vertical-average obstacle problems"};
    app.require_subcommand(1);

    const char* names[] = {"poisson", "rearrangement", "obstacle", "compare", "counterexample",
                           "verify"};
    const char* descriptions[] = {
        "solve the unit-rhs Dirichlet problem on the cylinder",
        "minimize the rearrangement energy by conditional gradient",
        "minimize the vertical-average obstacle functional",
        "comparison principle for the averaged solutions v",
        "comparison-failure certificate for the solutions u",
        "run the full verification suite"};

    std::string config_path;
    std::string out_dir;
    std::string selected;
    for (int i = 0; i < 6; ++i) {
        auto* sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--config", config_path, "path to the JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->callback([&selected, name = names[i]] { selected = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return dispatch(selected, config_path, out_dir);
}
