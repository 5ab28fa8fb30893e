#pragma once
// Identity suites: each scenario runs the series solver on a named metric
// and grid, evaluates a batch of operator identities, and reports relative
// residuals against per-identity tolerances.  Suites: quick (flat, < 1 min),
// dim4, dim6, covariance, full (everything).

#include "bg/reference.hpp"
#include "bg/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bg {

struct IdentityCheck {
    std::string name;
    std::string anchor; // identity family tag used in reports
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::string id;
    int n = 0;
    int k = -1;
    int ell = -1;
    std::string metric;
    std::string grid;
    unsigned seed = 0;
    std::vector<IdentityCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct Scenario {
    std::string id;
    std::function<IdentityReport()> run;
};

// Scenario matrix for a suite; seed_override != 0 reseeds every scenario.
std::vector<Scenario> build_suite(const std::string& suite, unsigned seed_override = 0);

struct SuiteResult {
    std::string suite;
    std::vector<IdentityReport> reports;
    int passed = 0;
    int failed = 0;
};

SuiteResult run_suite(const std::string& suite, unsigned seed_override = 0,
                      double tolerance_scale = 1.0, bool verbose = false);

// JSON text of the report in the schema
// {"suite":..., "scenarios":[...], "summary":{"passed":..,"failed":..}}.
std::string report_json(const SuiteResult& result);

// Relative residual of a - b scaled by max of the norms and a floor.
double rel_residual(const std::vector<double>& a, const std::vector<double>& b, double floor_scale);

} // namespace bg
