#include "lubchain/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lubchain/error.hpp"

namespace lubchain::continuum {
namespace {

constexpr double kNodeSnap = 1e-12;

/// Per-element data of the Galerkin system.
struct Assembly
{
    std::vector<double> nodes;
    std::vector<unsigned char> rigid;
    std::vector<double> conductance;  // K_e / h_e on elastic elements
    std::vector<double> left_load;    // int_e rho f phi_left
    std::vector<double> right_load;   // int_e rho f phi_right
};

Assembly assemble(MacroProblem const& problem)
{
    Assembly a;
    a.nodes = build_grid(problem);
    std::size_t const m = a.nodes.size() - 1;
    a.rigid.assign(m, 0);
    a.conductance.assign(m, 0.0);
    a.left_load.assign(m, 0.0);
    a.right_load.assign(m, 0.0);
    bool unsupported = false;

#pragma omp parallel for schedule(static)
    for (std::size_t e = 0; e < m; ++e)
    {
        double const x0 = a.nodes[e];
        double const x1 = a.nodes[e + 1];
        double const h = x1 - x0;
        a.rigid[e] = problem.density.rigid_on(x0, x1, problem.rigid_threshold);
        if (!a.rigid[e])
        {
            double const k_int = problem.density.inverse_vacuum_integral(x0, x1);
            if (!std::isfinite(k_int))
            {
#pragma omp atomic write
                unsupported = true;
            }
            a.conductance[e] = k_int / (h * h);
        }
        auto const& rho = problem.density;
        auto const& f = problem.force;
        a.left_load[e] = integrate_smooth(
            [&](double x) { return rho(x) * f(x) * (x1 - x) / h; }, x0, x1);
        a.right_load[e] = integrate_smooth(
            [&](double x) { return rho(x) * f(x) * (x - x0) / h; }, x0, x1);
    }
    if (unsupported)
    {
        throw InputError(
            "solve_macro: 1/(1 - rho) is not integrable on an element that is not rigid");
    }
    return a;
}

std::vector<double> nodal_loads(Assembly const& a)
{
    std::vector<double> loads(a.nodes.size(), 0.0);
    for (std::size_t e = 0; e < a.rigid.size(); ++e)
    {
        loads[e] += a.left_load[e];
        loads[e + 1] += a.right_load[e];
    }
    return loads;
}

/// Integral of rho f over [a, b].
double load_between(MacroProblem const& problem, double a, double b)
{
    auto const& rho = problem.density;
    auto const& f = problem.force;
    if (auto const* c = std::get_if<DensityProfile::Constant>(&rho.data()))
        return c->value * (f.antiderivative(b) - f.antiderivative(a));
    if (auto const* p = std::get_if<DensityProfile::Piecewise>(&rho.data()))
    {
        auto bp = p->field.breakpoints();
        auto vals = p->field.values();
        double sum = 0.0;
        for (std::size_t j = 0; j < vals.size(); ++j)
        {
            double lo = std::max(a, bp[j]);
            double hi = std::min(b, bp[j + 1]);
            if (hi > lo)
                sum += vals[j] * (f.antiderivative(hi) - f.antiderivative(lo));
        }
        return sum;
    }
    return integrate_smooth([&](double x) { return rho(x) * f(x); }, a, b, 16);
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<double> build_grid(MacroProblem const& problem)
{
    if (problem.grid_size < 1)
        throw InputError("grid size must be >= 1");
    std::size_t const n = static_cast<std::size_t>(problem.grid_size);
    std::vector<double> nodes(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        nodes[i] = double(i) / double(n);

    auto extra = problem.density.breakpoints();
    auto fb = problem.force.breakpoints();
    extra.insert(extra.end(), fb.begin(), fb.end());
    for (double b : extra)
    {
        if (!(b > 0.0 && b < 1.0))
            continue;
        auto it = std::lower_bound(nodes.begin(), nodes.end(), b);
        bool const near_right = it != nodes.end() && std::abs(*it - b) <= kNodeSnap;
        bool const near_left = it != nodes.begin() && std::abs(*(it - 1) - b) <= kNodeSnap;
        if (!near_left && !near_right)
            nodes.insert(it, b);
    }
    return nodes;
}

MacroSolution solve_macro(MacroProblem const& problem, MacroOptions const& opts)
{
    auto a = assemble(problem);
    auto loads = nodal_loads(a);
    std::size_t const m = a.rigid.size();

    ChainSystem system;
    system.conductance = a.conductance;
    system.rigid = a.rigid;
    system.loads = loads;
    system.reverse_merge_order = opts.reverse_merge_order;
    auto chain = solve_chain(system);

    // Element-average flux: K_e u' on elastic elements; on rigid elements the
    // mean of sigma continued through the block by sigma' = -rho f.
    std::vector<double> nodal(m + 1, 0.0);
    std::vector<bool> known(m + 1, false);
    for (std::size_t e = 0; e < m; ++e)
    {
        if (a.rigid[e])
            continue;
        double const s = chain.fluxes[e];
        if (!known[e + 1])
        {
            nodal[e + 1] = s - a.right_load[e];
            known[e + 1] = true;
        }
        if (!known[e])
        {
            nodal[e] = s + a.left_load[e];
            known[e] = true;
        }
    }
    for (auto const& g : chain.groups)
    {
        bool const at_left = g.first == 0;
        bool const at_right = g.last == m;
        if (at_left && at_right)
        {
            // Same convention as a fully packed particle array.
            double start = 0.0;
            for (std::size_t e = 0; e < m; ++e)
            {
                start += (1.0 - a.nodes[e]) * a.left_load[e]
                         + (1.0 - a.nodes[e + 1]) * a.right_load[e];
            }
            nodal[0] = start;
            for (std::size_t e = 0; e < m; ++e)
                nodal[e + 1] = nodal[e] - (a.left_load[e] + a.right_load[e]);
        }
        else if (at_left)
        {
            for (std::size_t j = g.last; j > g.first; --j)
                nodal[j - 1] = nodal[j] + (a.left_load[j - 1] + a.right_load[j - 1]);
        }
        else
        {
            for (std::size_t j = g.first; j < g.last; ++j)
                nodal[j + 1] = nodal[j] - (a.left_load[j] + a.right_load[j]);
        }
    }
    std::vector<double> element_flux(m);
    for (std::size_t e = 0; e < m; ++e)
        element_flux[e] = a.rigid[e] ? nodal[e] - a.right_load[e] : chain.fluxes[e];

    MacroSolution sol{PiecewiseAffineField(a.nodes, std::move(chain.values)),
                      PiecewiseConstantField(a.nodes, std::move(element_flux)),
                      std::move(nodal),
                      std::move(chain.groups),
                      std::move(a.rigid),
                      0.0,
                      chain.rigid_global};
    sol.energy = energy(problem, sol.field);
    return sol;
}

//---------------------------------------------------------------------------//
double energy(MacroProblem const& problem, PiecewiseAffineField const& field)
{
    auto const& rho = problem.density;
    auto const& f = problem.force;
    auto extra = rho.breakpoints();
    auto fb = f.breakpoints();
    extra.insert(extra.end(), fb.begin(), fb.end());
    std::sort(extra.begin(), extra.end());
    auto pts = merge_breakpoints(field.nodes(), extra);

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
    {
        double const x0 = pts[j];
        double const x1 = pts[j + 1];
        double const v0 = field(x0);
        double const v1 = field(x1);
        double const slope = (v1 - v0) / (x1 - x0);
        if (slope != 0.0)
        {
            if (rho.rigid_on(x0, x1, problem.rigid_threshold))
                return std::numeric_limits<double>::infinity();
            total += slope * slope * rho.inverse_vacuum_integral(x0, x1);
        }
        total -= integrate_smooth(
            [&](double x) { return rho(x) * f(x) * (v0 + slope * (x - x0)); }, x0, x1);
    }
    return total;
}

double galerkin_residual(MacroProblem const& problem, MacroSolution const& solution)
{
    auto a = assemble(problem);
    auto loads = nodal_loads(a);
    auto u = solution.field.values();
    if (u.size() != a.nodes.size())
        throw InputError("galerkin_residual: solution is not on the problem grid");
    std::size_t const m = a.rigid.size();
    auto groups = rigid_groups(a.rigid);

    double r = 0.0;
    auto check = [&](std::size_t first, std::size_t last) {
        if (first == 0 || last == m)
            return;
        double load = 0.0;
        for (std::size_t i = first; i <= last; ++i)
            load += loads[i];
        double const out = a.conductance[last] * (u[last + 1] - u[last]);
        double const in = a.conductance[first - 1] * (u[first] - u[first - 1]);
        r = std::max(r, std::abs(out - in + load));
    };
    std::size_t next = 0;
    for (auto const& g : groups)
    {
        for (; next < g.first; ++next)
            check(next, next);
        check(g.first, g.last);
        next = g.last + 1;
    }
    for (; next <= m; ++next)
        check(next, next);
    return r;
}

double flux_balance_defect(MacroProblem const& problem, MacroSolution const& solution)
{
    auto a = assemble(problem);
    auto u = solution.field.values();
    std::size_t const m = a.rigid.size();
    double worst = 0.0;
    for (auto const& g : rigid_groups(a.rigid))
    {
        if (g.first == 0 || g.last == m)
            continue;
        std::size_t const el = g.first - 1;
        std::size_t const er = g.last;
        double const sigma_a = a.conductance[el] * (u[el + 1] - u[el]) - a.right_load[el];
        double const sigma_b = a.conductance[er] * (u[er + 1] - u[er]) + a.left_load[er];
        double const jump = load_between(problem, a.nodes[g.first], a.nodes[g.last]);
        worst = std::max(worst, std::abs(sigma_b - sigma_a + jump));
    }
    return worst;
}

//---------------------------------------------------------------------------//
// AnalyticReference
//---------------------------------------------------------------------------//
AnalyticReference::AnalyticReference(ForceProfile force, std::vector<double> breaks,
                                     std::vector<double> rho)
    : force_(std::move(force)), breaks_(std::move(breaks)), rho_(std::move(rho))
{
    std::size_t const pieces = rho_.size();
    load_at_.assign(pieces + 1, 0.0);
    for (std::size_t j = 0; j < pieces; ++j)
    {
        load_at_[j + 1] = load_at_[j]
                          + rho_[j] * (force_.antiderivative(breaks_[j + 1])
                                       - force_.antiderivative(breaks_[j]));
    }

    // u(1) = sigma0 int (1 - rho) - int (1 - rho) P = 0
    double vacuum = 0.0;
    double weighted = 0.0;
    double plain = 0.0;
    for (std::size_t j = 0; j < pieces; ++j)
    {
        double const q = load_integral(j, breaks_[j + 1]);
        vacuum += (1.0 - rho_[j]) * (breaks_[j + 1] - breaks_[j]);
        weighted += (1.0 - rho_[j]) * q;
        plain += q;
    }
    if (vacuum > 0.0)
    {
        flux0_ = weighted / vacuum;
    }
    else
    {
        rigid_global_ = true;
        flux0_ = plain;  // int_0^1 (1 - x) rho f
    }

    u_at_.assign(pieces + 1, 0.0);
    flux_int_.assign(pieces + 1, 0.0);
    for (std::size_t j = 0; j < pieces; ++j)
    {
        double const h = breaks_[j + 1] - breaks_[j];
        double const piece_flux = flux0_ * h - load_integral(j, breaks_[j + 1]);
        flux_int_[j + 1] = flux_int_[j] + piece_flux;
        u_at_[j + 1] = u_at_[j] + (1.0 - rho_[j]) * piece_flux;
    }
    if (rigid_global_)
        std::fill(u_at_.begin(), u_at_.end(), 0.0);
}

std::size_t AnalyticReference::piece_of(double x) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    auto j = static_cast<std::ptrdiff_t>(it - breaks_.begin()) - 1;
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(rho_.size()) - 1));
}

double AnalyticReference::load(double x) const
{
    std::size_t const j = piece_of(x);
    return load_at_[j]
           + rho_[j] * (force_.antiderivative(x) - force_.antiderivative(breaks_[j]));
}

double AnalyticReference::load_integral(std::size_t j, double x) const
{
    double const x0 = breaks_[j];
    double const dx = x - x0;
    return load_at_[j] * dx
           + rho_[j]
                 * (force_.second_antiderivative(x) - force_.second_antiderivative(x0)
                    - force_.antiderivative(x0) * dx);
}

double AnalyticReference::flux_integral(double x) const
{
    std::size_t const j = piece_of(x);
    return flux_int_[j] + flux0_ * (x - breaks_[j]) - load_integral(j, x);
}

double AnalyticReference::value(double x) const
{
    if (rigid_global_)
        return 0.0;
    std::size_t const j = piece_of(x);
    double const piece_flux = flux0_ * (x - breaks_[j]) - load_integral(j, x);
    return u_at_[j] + (1.0 - rho_[j]) * piece_flux;
}

double AnalyticReference::flux(double x) const
{
    return flux0_ - load(x);
}

double AnalyticReference::derivative(double x) const
{
    if (rigid_global_)
        return 0.0;
    return (1.0 - rho_[piece_of(x)]) * flux(x);
}

MacroSolution AnalyticReference::sample(std::vector<double> const& nodes) const
{
    std::vector<double> values(nodes.size());
    std::vector<double> nodal(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        values[i] = value(nodes[i]);
        nodal[i] = flux(nodes[i]);
    }
    std::size_t const m = nodes.size() - 1;
    std::vector<double> mean(m);
    std::vector<unsigned char> rigid(m);
    for (std::size_t e = 0; e < m; ++e)
    {
        mean[e] = (flux_integral(nodes[e + 1]) - flux_integral(nodes[e]))
                  / (nodes[e + 1] - nodes[e]);
        rigid[e] = rho_[piece_of(0.5 * (nodes[e] + nodes[e + 1]))] >= 1.0;
    }
    auto groups = rigid_groups(rigid);
    return MacroSolution{PiecewiseAffineField(nodes, std::move(values)),
                         PiecewiseConstantField(nodes, std::move(mean)),
                         std::move(nodal),
                         std::move(groups),
                         std::move(rigid),
                         std::numeric_limits<double>::quiet_NaN(),
                         rigid_global_};
}

std::optional<AnalyticReference> analytic_reference(MacroProblem const& problem)
{
    auto const& data = problem.density.data();
    if (auto const* c = std::get_if<DensityProfile::Constant>(&data))
        return AnalyticReference(problem.force, {0.0, 1.0}, {c->value});
    if (auto const* p = std::get_if<DensityProfile::Piecewise>(&data))
    {
        auto bp = p->field.breakpoints();
        auto vals = p->field.values();
        return AnalyticReference(problem.force, {bp.begin(), bp.end()}, {vals.begin(), vals.end()});
    }
    return std::nullopt;
}

}  // namespace lubchain::continuum
