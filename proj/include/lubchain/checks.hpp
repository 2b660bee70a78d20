#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "experiments.hpp"

// Randomized and analytic invariant suites behind `lubchain check`.
namespace lubchain::checks {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Explicit formula, Thomas and (optionally) dense elimination on random
/// strictly feasible configurations with N intervals. Errors are relative
/// in max norm against Thomas.
struct OracleStats
{
    std::size_t configs = 0;
    double explicit_vs_thomas = 0.0;
    double dense_vs_thomas = 0.0;
    double thomas_residual = 0.0;
};
OracleStats oracle_equivalence(std::uint64_t seed, std::size_t num_intervals, int trials,
                               bool dense);

inline constexpr double kRegularizationEtas[] = {1e-2, 1e-4, 1e-6, 1e-8};

/// ||solve_clustered - solve_strict(contacts replaced by eta)||_inf on
/// random configurations with 1 to 5 clusters.
struct RegularizationStats
{
    std::size_t configs = 0;
    std::vector<double> max_error;  // per eta, worst configuration
    std::size_t non_decreasing = 0;  // configurations whose error fails to drop
};
RegularizationStats cluster_regularization(std::uint64_t seed, int trials);

/// Random eps-pipeline trials: strict or clustered configuration, random
/// piecewise force, loads 2 eps f^eps.
struct PipelineStats
{
    std::size_t trials = 0;
    std::size_t clustered = 0;
    double max_hminus1_residual = 0.0;
    std::size_t sup_violations = 0;
    std::size_t variation_violations = 0;
    double worst_sup_ratio = 0.0;        // sup|w| / (2 ||f||_L1)
    double worst_variation_ratio = 0.0;  // Var(w) / ||f||_L1
};
PipelineStats pipeline_suite(std::uint64_t seed, int trials);

struct MacroStats
{
    double constant_nodal_error = 0.0;   // vs x(1-x)/8 over several n
    double plateau_error = 0.0;          // |u_h - 0.04| on [0.4, 0.6]
    double plateau_slope = 0.0;          // max |u_h'| on rigid elements
    double flux_balance_defect = 0.0;
    std::vector<int> h_grid;
    std::vector<double> h_errors;        // sup over nodes and midpoints
    double h_order = 0.0;
};
MacroStats macro_analytic();

/// rho = 0.5 on [0, 1] except 1 on [0.4, 0.6].
DensityProfile rigid_inclusion_density();
/// eps = 1/16 ... 1/1024.
experiments::SweepPlan convergence_plan(DensityProfile density);

/// Every generated configuration feasible and the chi pairing constant
/// finite, over several densities.
struct GeneratorStats
{
    std::size_t configs = 0;
    std::size_t infeasible = 0;
    double max_chi_constant = 0.0;
    bool finite = true;
};
GeneratorStats generator_soundness();

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string metric;  // short human-readable figure
};

struct CheckOptions
{
    std::uint64_t seed = kDefaultSeed;
    int trials = 200;
};

std::vector<CheckResult> run_checks(CheckOptions const& opts);

/// "name,passed,metric" rows under a schema line.
std::string results_csv(std::vector<CheckResult> const& results);

}  // namespace lubchain::checks
