#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvset/grid.hpp"
#include "mvset/scenario.hpp"

namespace mvset {

/// Everything a run can be configured with. Defaults are listed by `mvset --help`.
struct ScenarioConfig {
    // [grid]
    Point lo{-1.0, -1.0};
    Point hi{1.0, 1.0};
    int n_side = 257;

    // [operator]
    std::string scenario = "laplace";
    /// "coefficients" or "metric" when the tensor is given inline.
    std::string kind;
    std::string t11, t12 = "0", t22;

    // [run]
    Point center{0.0, 0.0};
    std::vector<double> radii{0.2, 0.3, 0.4};
    std::string function = "x^2+y^2";
    std::optional<bool> subsolution;
    double radius = 0.3;
    std::vector<Point> centers;
    std::string data;
    Point point{0.0, 0.0};
    std::vector<double> nondegeneracy_steps{8.0, 16.0, 32.0};
    std::vector<double> shift_radii{0.8, 0.4, 0.2, 0.1};
    double tol_T = 1e-6;
    double T_lo = -0.5;
    double T_hi = 0.5;
    int T_count = 41;
    double scan_radius = 0.4;
    int lattice_nodes = 160;
    bool pgm = true;

    bool inline_operator() const { return !kind.empty(); }
    Scenario operator_scenario() const;
    Grid grid() const;
    /// Obstacle data expression: `data` or the scenario default (ConfigError if neither).
    std::string data_expression() const;
};

/// Parses `key = value` lines under [grid], [operator] and [run]; `#` starts a comment.
/// Unknown sections or keys, duplicates and malformed values raise ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Text printed by --help: subcommands, config keys and their defaults.
std::string config_help();

/// Entry point of the `mvset` executable; returns the process exit code.
int run_cli(int argc, char** argv);

/// Runs one subcommand, writing into out_dir (created if needed). Throws mvset::Error.
void run_command(const std::string& command, const ScenarioConfig& config, const std::string& out_dir);

}  // namespace mvset
