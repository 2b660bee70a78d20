#include "lubchain/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <omp.h>

#include "lubchain/error.hpp"

namespace lubchain::experiments {
namespace {

constexpr double kBoundSlack = 1e-12;
constexpr int kUniformHats = 64;

std::vector<double> uniform_nodes(int n)
{
    std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        nodes[static_cast<std::size_t>(i)] = double(i) / double(n);
    return nodes;
}

/// Macro reference shared by every row.
struct Reference
{
    std::string name;
    std::optional<continuum::AnalyticReference> analytic;
    std::optional<PiecewiseAffineField> fem;
    std::vector<double> derivative_pairing;  // int u' phi
    int grid_size = 0;

    PiecewiseAffineField field_for(ParticleConfiguration const& config) const
    {
        if (fem)
            return *fem;
        auto grid = uniform_nodes(grid_size);
        auto nodes = merge_breakpoints(grid, config.centers());
        nodes = merge_breakpoints(nodes, analytic->breakpoints());
        std::vector<double> values(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            values[i] = analytic->value(nodes[i]);
        return PiecewiseAffineField(std::move(nodes), std::move(values));
    }
};

Reference make_reference(SweepPlan const& plan)
{
    continuum::MacroProblem problem{plan.density, plan.force, plan.grid_size};
    Reference ref;
    ref.grid_size = plan.grid_size;
    ref.analytic = continuum::analytic_reference(problem);
    if (ref.analytic)
    {
        ref.name = "analytic";
        // u' is smooth between the density and force breakpoints.
        auto pts = merge_breakpoints(ref.analytic->breakpoints(), plan.force.breakpoints());
        for (auto const& phi : plan.test_family)
        {
            double sum = 0.0;
            for (std::size_t j = 0; j + 1 < pts.size(); ++j)
            {
                sum += integrate_smooth(
                    [&](double x) { return ref.analytic->derivative(x) * phi(x); }, pts[j],
                    pts[j + 1], 64);
            }
            ref.derivative_pairing.push_back(sum);
        }
    }
    else
    {
        ref.name = "fem(n=" + std::to_string(plan.grid_size) + ")";
        ref.fem = continuum::solve_macro(problem).field;
        auto du = ref.fem->derivative();
        for (auto const& phi : plan.test_family)
            ref.derivative_pairing.push_back(phi.pair(du));
    }
    return ref;
}

SweepRow run_row(SweepPlan const& plan, Reference const& ref, double eps, double f_l1)
{
    SweepRow row;
    row.epsilon = eps;
    std::optional<GeneratedConfiguration> gen;
    try
    {
        gen.emplace(generate_configuration(plan.density, eps));
    }
    catch (InputError const& e)
    {
        row.skipped = true;
        row.skip_reason = e.what();
        return row;
    }
    auto const& config = gen->config;
    row.epsilon_eff = config.radius();
    row.num_intervals = config.num_intervals();
    auto feas = check_feasibility(config);
    row.feasibility = to_string(feas);
    if (feas == FeasibilityClass::infeasible)
    {
        row.skipped = true;
        row.skip_reason = "generated configuration is infeasible";
        return row;
    }
    row.num_clusters = detect_clusters(config).clusters.size();

    auto sampled = sample_forces(config, plan.force);
    auto loads = particle_loads(config, sampled);
    auto sol = discrete::solve(config, loads);
    row.solver = discrete::to_string(sol.solver);
    row.solve_residual = sol.residual;

    auto u_eps = discrete::interpolant(config, sol);
    auto w = discrete::w_field(config, sol);
    row.l2_error = l2_error(u_eps, ref.field_for(config));

    auto du = u_eps.derivative();
    auto chi = characteristic_function(config);
    auto rho_eps = coarse_density(config);
    for (std::size_t k = 0; k < plan.test_family.size(); ++k)
    {
        auto const& phi = plan.test_family[k];
        row.derivative_pairing.push_back(std::abs(phi.pair(du) - ref.derivative_pairing[k]));
        row.chi_pairing.push_back(weak_pairing(chi, plan.density, phi));
        row.chi_coarse_pairing.push_back(weak_pairing(chi, rho_eps, phi));
        row.load_pairing.push_back(load_pairing(config, loads, plan.density, plan.force, phi));
    }

    auto bounds = bound_checks(w, f_l1);
    row.w_sup = bounds.sup;
    row.w_variation = bounds.variation;
    row.f_l1 = f_l1;
    row.sup_bound_ok = bounds.sup_ok;
    row.variation_bound_ok = bounds.variation_ok;
    row.hminus1_residual = h_minus1_residual(w, config, loads);
    return row;
}

SweepSummary summarize(SweepPlan const& plan, std::vector<SweepRow> const& all_rows)
{
    SweepSummary s;
    std::vector<SweepRow const*> rows;
    for (auto const& r : all_rows)
    {
        if (!r.skipped)
            rows.push_back(&r);
    }
    std::size_t const nf = plan.test_family.size();
    for (auto const& phi : plan.test_family)
        s.test_functions.push_back(phi.name());
    s.derivative_pairing_order.resize(nf);
    s.chi_pairing_order.resize(nf);
    s.chi_constant.assign(nf, 0.0);
    s.derivative_pairing_decreasing.assign(nf, false);
    if (rows.empty())
        return s;

    std::vector<double> eps;
    std::vector<double> l2;
    for (auto const* r : rows)
    {
        eps.push_back(r->epsilon_eff);
        l2.push_back(r->l2_error);
    }
    s.l2_order = fitted_order(eps, l2);
    s.l2_decreasing = rows.size() >= 2 && decreasing(l2.front(), l2.back());

    bool pairings_ok = true;
    for (std::size_t k = 0; k < nf; ++k)
    {
        std::vector<double> dp;
        std::vector<double> cp;
        for (auto const* r : rows)
        {
            dp.push_back(r->derivative_pairing[k]);
            cp.push_back(r->chi_pairing[k]);
            s.chi_constant[k] = std::max(s.chi_constant[k], r->chi_pairing[k] / r->epsilon_eff);
        }
        s.derivative_pairing_order[k] = fitted_order(eps, dp);
        s.chi_pairing_order[k] = fitted_order(eps, cp);
        s.derivative_pairing_decreasing[k] = rows.size() >= 2 && decreasing(dp.front(), dp.back());
        pairings_ok = pairings_ok && s.derivative_pairing_decreasing[k];
    }

    s.feasible = std::all_of(all_rows.begin(), all_rows.end(), [](SweepRow const& r) {
        return r.feasibility != "infeasible";
    });
    s.bounds_hold = std::all_of(rows.begin(), rows.end(), [](SweepRow const* r) {
        return r->sup_bound_ok && r->variation_bound_ok;
    });
    s.hminus1_holds = std::all_of(rows.begin(), rows.end(), [](SweepRow const* r) {
        return r->hminus1_residual <= kHminus1Tolerance;
    });
    s.chi_constant_finite = std::all_of(s.chi_constant.begin(), s.chi_constant.end(),
                                        [](double c) { return std::isfinite(c); });
    s.passed = s.l2_decreasing && pairings_ok && s.feasible && s.bounds_hold && s.hminus1_holds
               && s.chi_constant_finite;
    return s;
}

}  // namespace

//---------------------------------------------------------------------------//
void validate(SweepPlan const& plan)
{
    if (plan.epsilons.empty())
        throw InputError("plan: epsilons must not be empty");
    for (std::size_t i = 0; i < plan.epsilons.size(); ++i)
    {
        double const e = plan.epsilons[i];
        if (!(e > 0.0) || !std::isfinite(e))
            throw InputError("plan: every epsilon must be positive");
        if (i > 0 && !(e < plan.epsilons[i - 1]))
            throw InputError("plan: epsilons must be strictly decreasing");
    }
    if (plan.test_family.empty())
        throw InputError("plan: test_family must not be empty");
    if (plan.grid_size < 1)
        throw InputError("plan: grid_size must be >= 1");
}

std::vector<double> epsilon_range(double eps_max, double eps_min, double ratio)
{
    if (!(eps_max > 0.0) || !(eps_min > 0.0) || eps_min > eps_max || !(ratio > 1.0))
        throw InputError("epsilon_range: need 0 < min <= max and ratio > 1");
    std::vector<double> out;
    for (int k = 0;; ++k)
    {
        double const e = eps_max / std::pow(ratio, k);
        if (e < eps_min * (1.0 - 1e-12))
            break;
        out.push_back(e);
    }
    return out;
}

SweepReport run_sweep(SweepPlan const& plan, int jobs)
{
    validate(plan);
    auto ref = make_reference(plan);
    double const f_l1 = plan.force.l1_norm();

    SweepReport report;
    report.reference = ref.name;
    report.rows.resize(plan.epsilons.size());
    int const threads = jobs > 0 ? jobs : omp_get_max_threads();
    std::ptrdiff_t const n = static_cast<std::ptrdiff_t>(plan.epsilons.size());

    std::string first_error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i)
    {
        auto const k = static_cast<std::size_t>(i);
        try
        {
            report.rows[k] = run_row(plan, ref, plan.epsilons[k], f_l1);
        }
        catch (std::exception const& e)
        {
#pragma omp critical(sweep_error)
            if (first_error.empty())
                first_error = e.what();
        }
    }
    if (!first_error.empty())
        throw SolverError("sweep: " + first_error);

    report.summary = summarize(plan, report.rows);
    return report;
}

//---------------------------------------------------------------------------//
double l2_error(PiecewiseAffineField const& u_eps, PiecewiseAffineField const& u_macro)
{
    return l2_distance(u_eps, u_macro);
}

double weak_pairing(PiecewiseConstantField const& a, PiecewiseConstantField const& target,
                    TestFunction const& phi)
{
    return std::abs(phi.pair(a) - phi.pair(target));
}

double weak_pairing(PiecewiseConstantField const& a, DensityProfile const& rho,
                    TestFunction const& phi)
{
    return std::abs(phi.pair(a) - rho.pair(phi));
}

double weighted_load(DensityProfile const& rho, ForceProfile const& f, TestFunction const& phi)
{
    std::vector<double> ends{0.0, 1.0};
    auto pts = merge_breakpoints(ends, rho.breakpoints());
    pts = merge_breakpoints(pts, f.breakpoints());
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
    {
        sum += integrate_smooth([&](double x) { return rho(x) * f(x) * phi(x); }, pts[j],
                                pts[j + 1], 8);
    }
    return sum;
}

double load_pairing(ParticleConfiguration const& config, std::span<double const> loads,
                    DensityProfile const& rho, ForceProfile const& f, TestFunction const& phi)
{
    if (loads.size() + 1 != config.num_intervals())
        throw InputError("load_pairing: expected one load per interior particle");
    double atoms = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i)
        atoms += loads[i] * phi(config.center(i + 1));
    return std::abs(atoms - weighted_load(rho, f, phi));
}

BoundCheck bound_checks(PiecewiseConstantField const& w, double f_norm)
{
    BoundCheck b;
    b.sup = w.sup_norm();
    b.variation = w.total_variation();
    b.sup_ok = b.sup <= 2.0 * f_norm * (1.0 + kBoundSlack);
    b.variation_ok = b.variation <= f_norm * (1.0 + kBoundSlack);
    return b;
}

double h_minus1_residual(PiecewiseConstantField const& w, ParticleConfiguration const& config,
                         std::span<double const> loads, std::span<double const> hat_nodes)
{
    if (loads.size() + 1 != config.num_intervals())
        throw InputError("h_minus1_residual: expected one load per interior particle");
    std::size_t const m = hat_nodes.size();
    if (m < 3)
        return 0.0;

    // Atom pairing sum_i loads_i phi_k(q_i), distributed cell by cell.
    std::vector<double> atoms(m, 0.0);
    for (std::size_t i = 0; i < loads.size(); ++i)
    {
        double const q = config.center(i + 1);
        auto it = std::upper_bound(hat_nodes.begin(), hat_nodes.end(), q);
        std::size_t c = static_cast<std::size_t>(it - hat_nodes.begin());
        c = std::clamp<std::size_t>(c, 1, m - 1) - 1;
        double const t = (q - hat_nodes[c]) / (hat_nodes[c + 1] - hat_nodes[c]);
        atoms[c] += loads[i] * (1.0 - t);
        atoms[c + 1] += loads[i] * t;
    }

    std::vector<double> mean(m - 1);
    for (std::size_t c = 0; c + 1 < m; ++c)
        mean[c] = w.integral(hat_nodes[c], hat_nodes[c + 1]) / (hat_nodes[c + 1] - hat_nodes[c]);

    double r = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k)
        r = std::max(r, std::abs(mean[k - 1] - mean[k] - atoms[k]));
    return r;
}

double h_minus1_residual(PiecewiseConstantField const& w, ParticleConfiguration const& config,
                         std::span<double const> loads)
{
    auto grid = uniform_nodes(kUniformHats);
    return std::max(h_minus1_residual(w, config, loads, config.centers()),
                    h_minus1_residual(w, config, loads, grid));
}

std::optional<double> fitted_order(std::span<double const> eps, std::span<double const> values)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < eps.size() && i < values.size(); ++i)
    {
        if (!(values[i] > 0.0) || !(eps[i] > 0.0))
            continue;
        double const x = std::log(eps[i]);
        double const y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        return std::nullopt;
    double const den = double(n) * sxx - sx * sx;
    if (den == 0.0)
        return std::nullopt;
    return (double(n) * sxy - sx * sy) / den;
}

bool decreasing(double first, double last)
{
    return last < first || std::max(first, last) <= kTrendFloor;
}

}  // namespace lubchain::experiments
