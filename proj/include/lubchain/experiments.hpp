#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "continuum.hpp"
#include "discrete.hpp"
#include "fields.hpp"
#include "geometry.hpp"
#include "profiles.hpp"

namespace lubchain::experiments {

/// Metrics at or below this level count as converged when judging trends.
inline constexpr double kTrendFloor = 1e-12;
inline constexpr double kHminus1Tolerance = 1e-10;

struct SweepPlan
{
    DensityProfile density;
    ForceProfile force;
    std::vector<double> epsilons;  // strictly decreasing
    int grid_size = 4096;
    std::vector<TestFunction> test_family = default_test_family();
    std::uint64_t seed = 0;
};

/// Throws InputError on an invalid plan.
void validate(SweepPlan const& plan);

/// eps_max, eps_max / ratio, ... down to eps_min (inclusive up to rounding).
std::vector<double> epsilon_range(double eps_max, double eps_min, double ratio);

struct SweepRow
{
    double epsilon = 0.0;  // requested radius
    bool skipped = false;
    std::string skip_reason;

    double epsilon_eff = 0.0;
    std::size_t num_intervals = 0;
    std::size_t num_clusters = 0;
    std::string feasibility;
    std::string solver;

    double l2_error = 0.0;
    std::vector<double> derivative_pairing;  // |int (u_eps' - u') phi|
    std::vector<double> chi_pairing;         // |int (chi - rho) phi|
    std::vector<double> chi_coarse_pairing;  // |int (chi - rho_eps) phi|
    std::vector<double> load_pairing;        // |sum 2 eps f_i phi(q_i) - int rho f phi|

    double w_sup = 0.0;
    double w_variation = 0.0;
    double f_l1 = 0.0;
    bool sup_bound_ok = true;
    bool variation_bound_ok = true;
    double hminus1_residual = 0.0;
    double solve_residual = 0.0;
};

struct SweepSummary
{
    std::vector<std::string> test_functions;
    std::optional<double> l2_order;
    std::vector<std::optional<double>> derivative_pairing_order;
    std::vector<std::optional<double>> chi_pairing_order;
    /// max over rows of chi_pairing / eps_eff, per test function.
    std::vector<double> chi_constant;

    bool l2_decreasing = false;
    std::vector<bool> derivative_pairing_decreasing;
    bool feasible = false;
    bool bounds_hold = false;
    bool hminus1_holds = false;
    bool chi_constant_finite = false;
    bool passed = false;
};

struct SweepReport
{
    std::string reference;  // "analytic" or "fem(n=...)"
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

/// Rows run in parallel on `jobs` threads (0: OpenMP default); the result
/// does not depend on the thread count.
SweepReport run_sweep(SweepPlan const& plan, int jobs = 0);

/// Exact L2 distance of two piecewise-affine fields on [0, 1].
double l2_error(PiecewiseAffineField const& u_eps, PiecewiseAffineField const& u_macro);

/// |int (a - target) phi|, exact for piecewise-constant a and target.
double weak_pairing(PiecewiseConstantField const& a, PiecewiseConstantField const& target,
                    TestFunction const& phi);
/// |int (a - rho) phi|.
double weak_pairing(PiecewiseConstantField const& a, DensityProfile const& rho,
                    TestFunction const& phi);

/// int rho f phi, integrated piece by piece.
double weighted_load(DensityProfile const& rho, ForceProfile const& f, TestFunction const& phi);

/// |sum_i loads_i phi(q_i) - int rho f phi| over interior particles.
double load_pairing(ParticleConfiguration const& config, std::span<double const> loads,
                    DensityProfile const& rho, ForceProfile const& f, TestFunction const& phi);

struct BoundCheck
{
    double sup = 0.0;
    double variation = 0.0;
    bool sup_ok = true;
    bool variation_ok = true;
};

/// sup|w| <= 2 ||f||_L1 and Var(w) <= ||f||_L1 (relative slack 1e-12 for
/// rounding).
BoundCheck bound_checks(PiecewiseConstantField const& w, double f_norm);

/// max over hats phi_k on `hat_nodes` of |int w phi_k' - sum_i loads_i phi_k(q_i)|.
double h_minus1_residual(PiecewiseConstantField const& w, ParticleConfiguration const& config,
                         std::span<double const> loads, std::span<double const> hat_nodes);
/// Same over the hats of the particle grid and of a uniform 64-cell grid.
double h_minus1_residual(PiecewiseConstantField const& w, ParticleConfiguration const& config,
                         std::span<double const> loads);

/// Least-squares slope of log(value) against log(eps) over positive values;
/// empty with fewer than two usable points.
std::optional<double> fitted_order(std::span<double const> eps, std::span<double const> values);

/// last < first, or both at or below kTrendFloor.
bool decreasing(double first, double last);

}  // namespace lubchain::experiments
