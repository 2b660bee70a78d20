#include "lubchain/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lubchain/continuum.hpp"
#include "lubchain/discrete.hpp"
#include "lubchain/format.hpp"
#include "lubchain/io.hpp"
#include "lubchain/random_cases.hpp"
#include "lubchain/reference.hpp"
#include "lubchain/rng.hpp"

namespace lubchain::checks {
namespace {

double relative_max_error(std::span<double const> a, std::span<double const> b)
{
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

double max_abs_difference(std::span<double const> a, std::span<double const> b)
{
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(a[i] - b[i]));
    return diff;
}

std::string sci(double v)
{
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

}  // namespace

//---------------------------------------------------------------------------//
OracleStats oracle_equivalence(std::uint64_t seed, std::size_t num_intervals, int trials,
                               bool dense)
{
    OracleStats stats;
    stats.configs = static_cast<std::size_t>(trials);
    std::uint64_t const suite = stream_seed(seed, num_intervals);
    double ex = 0.0, de = 0.0, res = 0.0;

#pragma omp parallel for schedule(dynamic) reduction(max : ex, de, res)
    for (int t = 0; t < trials; ++t)
    {
        Xoshiro256 rng(stream_seed(suite, static_cast<std::uint64_t>(t)));
        auto config = random_cases::strict_configuration(rng, num_intervals);
        auto loads = random_cases::loads(rng, num_intervals - 1);

        auto thomas = discrete::solve_strict(config, loads);
        auto closed = discrete::solve_explicit(config, loads);
        std::span<double const> interior(thomas.velocities.data() + 1, num_intervals - 1);
        std::span<double const> interior_closed(closed.velocities.data() + 1, num_intervals - 1);
        ex = std::max(ex, relative_max_error(interior_closed, interior));
        res = std::max(res, thomas.residual);
        if (dense)
        {
            auto m = reference::to_dense(discrete::build_matrix(config));
            auto u = reference::dense_solve(std::move(m), loads);
            de = std::max(de, relative_max_error(u, interior));
        }
    }
    stats.explicit_vs_thomas = ex;
    stats.dense_vs_thomas = de;
    stats.thomas_residual = res;
    return stats;
}

RegularizationStats cluster_regularization(std::uint64_t seed, int trials)
{
    constexpr std::size_t num_etas = std::size(kRegularizationEtas);
    RegularizationStats stats;
    stats.configs = static_cast<std::size_t>(trials);
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(trials));
    std::uint64_t const suite = stream_seed(seed, 0x7e6a);

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t)
    {
        Xoshiro256 rng(stream_seed(suite, static_cast<std::uint64_t>(t)));
        std::size_t const k = rng.uniform_int(1, 5);
        std::size_t const n = rng.uniform_int(4 * k + 1, 80);
        auto config = random_cases::clustered_configuration(rng, n, k);
        auto loads = random_cases::loads(rng, n - 1);
        auto clustered = discrete::solve_clustered(config, detect_clusters(config), loads);

        auto& e = errors[static_cast<std::size_t>(t)];
        for (double eta : kRegularizationEtas)
        {
            auto gaps = config.contact_gaps();
            for (double& g : gaps)
            {
                if (g == 0.0)
                    g = eta;
            }
            auto strict = discrete::solve_strict(gaps, loads);
            e.push_back(max_abs_difference(clustered.velocities, strict.velocities));
        }
    }

    stats.max_error.assign(num_etas, 0.0);
    for (auto const& e : errors)
    {
        for (std::size_t j = 0; j < num_etas; ++j)
            stats.max_error[j] = std::max(stats.max_error[j], e[j]);
        for (std::size_t j = 1; j < num_etas; ++j)
        {
            if (!(e[j] < e[j - 1]))
            {
                ++stats.non_decreasing;
                break;
            }
        }
    }
    return stats;
}

PipelineStats pipeline_suite(std::uint64_t seed, int trials)
{
    PipelineStats stats;
    stats.trials = static_cast<std::size_t>(trials);
    std::uint64_t const suite = stream_seed(seed, 0x1e55);
    double res = 0.0, sup_ratio = 0.0, var_ratio = 0.0;
    std::size_t clustered = 0, sup_bad = 0, var_bad = 0;

#pragma omp parallel for schedule(dynamic) \
    reduction(max : res, sup_ratio, var_ratio) reduction(+ : clustered, sup_bad, var_bad)
    for (int t = 0; t < trials; ++t)
    {
        Xoshiro256 rng(stream_seed(suite, static_cast<std::uint64_t>(t)));
        std::size_t const n = rng.uniform_int(3, 300);
        std::size_t const max_k = std::min<std::size_t>(5, (n - 1) / 4);
        bool const with_contacts = max_k > 0 && rng.uniform() < 0.5;
        auto config = with_contacts
                          ? random_cases::clustered_configuration(rng, n, rng.uniform_int(1, max_k))
                          : random_cases::strict_configuration(rng, n);
        auto f = random_cases::piecewise_force(rng);

        auto loads = particle_loads(config, sample_forces(config, f));
        auto sol = discrete::solve(config, loads);
        auto w = discrete::w_field(config, sol);
        double const f_l1 = f.l1_norm();
        auto bounds = experiments::bound_checks(w, f_l1);

        clustered += sol.solver == discrete::SolverKind::clustered;
        res = std::max(res, experiments::h_minus1_residual(w, config, loads));
        sup_bad += !bounds.sup_ok;
        var_bad += !bounds.variation_ok;
        if (f_l1 > 0.0)
        {
            sup_ratio = std::max(sup_ratio, bounds.sup / (2.0 * f_l1));
            var_ratio = std::max(var_ratio, bounds.variation / f_l1);
        }
    }
    stats.clustered = clustered;
    stats.max_hminus1_residual = res;
    stats.sup_violations = sup_bad;
    stats.variation_violations = var_bad;
    stats.worst_sup_ratio = sup_ratio;
    stats.worst_variation_ratio = var_ratio;
    return stats;
}

//---------------------------------------------------------------------------//
DensityProfile rigid_inclusion_density()
{
    return DensityProfile::step(0.5, {{0.4, 0.6, 1.0}});
}

experiments::SweepPlan convergence_plan(DensityProfile density)
{
    experiments::SweepPlan plan{std::move(density), ForceProfile::constant(1.0), {}};
    for (int k = 16; k <= 1024; k *= 2)
        plan.epsilons.push_back(1.0 / k);
    return plan;
}

MacroStats macro_analytic()
{
    MacroStats stats;
    for (int n : {1, 2, 3, 5, 8, 16, 64, 100, 128, 1000})
    {
        continuum::MacroProblem p{DensityProfile::constant(0.5), ForceProfile::constant(1.0), n};
        auto sol = continuum::solve_macro(p);
        auto x = sol.field.nodes();
        auto u = sol.field.values();
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            double const exact = x[i] * (1.0 - x[i]) / 8.0;
            stats.constant_nodal_error = std::max(stats.constant_nodal_error, std::abs(u[i] - exact));
        }
    }

    for (int n : {10, 16, 64, 100, 128})
    {
        continuum::MacroProblem p{rigid_inclusion_density(), ForceProfile::constant(1.0), n};
        auto sol = continuum::solve_macro(p);
        auto x = sol.field.nodes();
        auto u = sol.field.values();
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (x[i] >= 0.4 && x[i] <= 0.6)
                stats.plateau_error = std::max(stats.plateau_error, std::abs(u[i] - 0.04));
        }
        for (std::size_t e = 0; e < sol.rigid_elements.size(); ++e)
        {
            if (sol.rigid_elements[e])
            {
                stats.plateau_slope = std::max(
                    stats.plateau_slope, std::abs((u[e + 1] - u[e]) / (x[e + 1] - x[e])));
            }
        }
        stats.flux_balance_defect
            = std::max(stats.flux_balance_defect, continuum::flux_balance_defect(p, sol));
    }

    // Nodal values of 1D P1 are exact for this operator, so the error is
    // measured at nodes and element midpoints.
    double const rho0 = 0.5;
    auto exact = [&](double x) {
        return rho0 * (1.0 - rho0) * std::sin(std::numbers::pi * x)
               / (std::numbers::pi * std::numbers::pi);
    };
    std::vector<double> hs;
    for (int n : {16, 32, 64, 128})
    {
        continuum::MacroProblem p{DensityProfile::constant(rho0), ForceProfile::sine(1.0, 1), n};
        auto sol = continuum::solve_macro(p);
        auto x = sol.field.nodes();
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            err = std::max(err, std::abs(sol.field(x[i]) - exact(x[i])));
            if (i + 1 < x.size())
            {
                double const mid = 0.5 * (x[i] + x[i + 1]);
                err = std::max(err, std::abs(sol.field(mid) - exact(mid)));
            }
        }
        stats.h_grid.push_back(n);
        stats.h_errors.push_back(err);
        hs.push_back(1.0 / n);
    }
    stats.h_order = experiments::fitted_order(hs, stats.h_errors).value_or(0.0);
    return stats;
}

GeneratorStats generator_soundness()
{
    GeneratorStats stats;
    std::vector<DensityProfile> densities{
        DensityProfile::constant(0.5),
        DensityProfile::constant(0.3),
        rigid_inclusion_density(),
        DensityProfile::bump(0.5, 0.4, 0.8, 0.2),
        DensityProfile::tabulated(PiecewiseConstantField({0.0, 0.3, 0.7, 1.0}, {0.2, 0.9, 0.4})),
    };
    for (auto const& rho : densities)
    {
        auto plan = convergence_plan(rho);
        plan.epsilons.pop_back();
        plan.grid_size = 512;
        auto report = experiments::run_sweep(plan);
        for (auto const& row : report.rows)
        {
            if (row.skipped && row.feasibility.empty())
                continue;
            ++stats.configs;
            stats.infeasible += row.feasibility == "infeasible";
        }
        stats.finite = stats.finite && report.summary.chi_constant_finite;
        for (double c : report.summary.chi_constant)
            stats.max_chi_constant = std::max(stats.max_chi_constant, c);
    }
    return stats;
}

//---------------------------------------------------------------------------//
std::vector<CheckResult> run_checks(CheckOptions const& opts)
{
    std::vector<CheckResult> out;
    int const trials = std::max(1, opts.trials);

    for (std::size_t n : {3, 10, 100, 10000, 100000})
    {
        bool const dense = n <= 100;
        auto s = oracle_equivalence(opts.seed, n, trials, dense);
        double const worst = std::max(s.explicit_vs_thomas, s.dense_vs_thomas);
        out.push_back({"oracle equivalence N=" + std::to_string(n) + (dense ? " (dense)" : ""),
                       worst <= 1e-12, "max rel " + sci(worst)});
    }

    {
        auto s = cluster_regularization(opts.seed, std::max(1, trials / 4));
        bool const ok = s.non_decreasing == 0 && s.max_error.back() <= 1e-6;
        out.push_back({"cluster regularization limit", ok,
                       "err(1e-8) " + sci(s.max_error.back()) + ", non-monotone "
                           + std::to_string(s.non_decreasing)});
    }

    {
        auto s = pipeline_suite(opts.seed, 5 * trials);
        out.push_back({"H^-1 balance identity", s.max_hminus1_residual <= experiments::kHminus1Tolerance,
                       "max residual " + sci(s.max_hminus1_residual)});
        out.push_back({"w sup and variation bounds", s.sup_violations + s.variation_violations == 0,
                       std::to_string(s.sup_violations + s.variation_violations) + " violations / "
                           + std::to_string(s.trials)});
    }

    {
        auto m = macro_analytic();
        out.push_back({"macro constant density", m.constant_nodal_error <= 1e-12,
                       "nodal err " + sci(m.constant_nodal_error)});
        out.push_back({"macro rigid inclusion plateau",
                       m.plateau_error <= 1e-10 && m.plateau_slope == 0.0,
                       "plateau err " + sci(m.plateau_error)});
        out.push_back({"macro h-convergence", m.h_order >= 1.9, "order " + sci(m.h_order)});
    }

    for (auto const& [name, rho] :
         {std::pair{"sweep rho=0.5", DensityProfile::constant(0.5)},
          std::pair{"sweep rigid inclusion", rigid_inclusion_density()}})
    {
        auto report = experiments::run_sweep(convergence_plan(rho));
        auto const& rows = report.rows;
        out.push_back({name, report.summary.passed,
                       "l2 " + sci(rows.front().l2_error) + " -> " + sci(rows.back().l2_error)});
    }

    {
        auto g = generator_soundness();
        out.push_back({"generator soundness", g.infeasible == 0 && g.finite,
                       "C_chi " + sci(g.max_chi_constant)});
    }

    {
        auto plan = convergence_plan(rigid_inclusion_density());
        auto a = io::report_csv(experiments::run_sweep(plan, 1));
        auto b = io::report_csv(experiments::run_sweep(plan));
        out.push_back({"sweep determinism", a == b, a == b ? "identical" : "differs"});
    }
    return out;
}

std::string results_csv(std::vector<CheckResult> const& results)
{
    std::string out = io::schema_line("check") + "name,passed,metric\n";
    for (auto const& r : results)
        out += r.name + "," + (r.passed ? "1" : "0") + "," + r.metric + "\n";
    return out;
}

}  // namespace lubchain::checks
