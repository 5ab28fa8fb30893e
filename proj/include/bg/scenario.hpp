#pragma once
// Scenario configuration for the CLI: grid, metric, operator and input-form
// specs parsed from a key/value file with [section] headers.  The metric is
// flat or conformally flat with a band-limited trig conformal factor; input
// forms come from an FBIN1 file, a seeded random low-frequency draw, or an
// explicit trig expression.

#include "bg/curvature.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace bg {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrigTermSpec {
    double amplitude = 0.0;
    std::vector<int> mode; // length n
    bool sine = true;
};

struct MetricSpec {
    std::string type = "flat"; // flat | conformal
    std::vector<TrigTermSpec> terms;
};

struct ExprTermSpec {
    TrigTermSpec trig;
    std::vector<int> axes; // dy_{i1} ^ ... ^ dy_{ik}, 0-based, strictly increasing
};

struct InputSpec {
    std::string type = "random"; // file | random | expression
    std::string file;
    unsigned seed = 1;
    int max_mode = 2;
    std::vector<ExprTermSpec> terms;
};

struct ScenarioConfig {
    int n = 0;
    std::vector<int> sizes;
    MetricSpec metric;
    int k = 0;
    int ell = 0;
    std::string op; // registry: Lk_ell | L | G | B | C | D | Bp | Dp | Q | Gtop
    InputSpec input;
    std::string out_dir = ".";
    double tolerance = 0.0; // 0 = module default (guard tolerance override)
};

// Parse and validate; throws config_error with the offending key in the
// message.
ScenarioConfig parse_scenario_config(const std::string& path);

// Realized pieces of a config.
GridPtr build_grid(const ScenarioConfig& cfg);
ScalarField build_phi(const ScenarioConfig& cfg, const GridPtr& grid); // conformal only
Metric build_metric(const ScenarioConfig& cfg, const GridPtr& grid);
FormField build_input(const ScenarioConfig& cfg, const GridPtr& grid);

} // namespace bg
