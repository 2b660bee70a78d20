#include "lubchain/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "lubchain/error.hpp"
#include "lubchain/kernels.hpp"

namespace lubchain::discrete {
namespace {

void require_force_count(std::size_t num_intervals, std::span<double const> forces)
{
    if (forces.size() + 1 != num_intervals)
        throw InputError("expected one force per interior particle");
}

/// Loads on nodes 0..N with the walls carrying none.
std::vector<double> node_loads(std::span<double const> forces)
{
    std::vector<double> loads(forces.size() + 2, 0.0);
    std::copy(forces.begin(), forces.end(), loads.begin() + 1);
    return loads;
}

struct LinkData
{
    std::vector<double> conductance;
    std::vector<unsigned char> rigid;
};

LinkData link_data(ParticleConfiguration const& config, ClusterDecomposition const& clusters,
                   SolveOptions const& opts)
{
    auto d = config.contact_gaps(opts.contact_tolerance);
    LinkData links;
    links.rigid = clusters.contact_links(d.size());
    links.conductance.resize(d.size(), 0.0);
    for (std::size_t j = 0; j < d.size(); ++j)
    {
        bool const contact = d[j] == 0.0;
        if (contact != bool(links.rigid[j]))
        {
            throw InputError("cluster decomposition does not match the configuration contacts");
        }
        if (!contact)
            links.conductance[j] = opts.viscosity / d[j];
    }
    return links;
}

}  // namespace

char const* to_string(SolverKind kind)
{
    switch (kind)
    {
        case SolverKind::thomas:
            return "thomas";
        case SolverKind::explicit_formula:
            return "explicit";
        case SolverKind::clustered:
            return "clustered";
    }
    return "?";
}

//---------------------------------------------------------------------------//
TridiagonalMatrix build_matrix(std::span<double const> gaps, SolveOptions const& opts)
{
    if (gaps.size() < 2)
        throw InputError("build_matrix: need at least one interior particle");
    for (double g : gaps)
    {
        if (g <= opts.contact_tolerance)
            throw SolverError("build_matrix: contact present, use solve_clustered");
    }
    std::size_t const n = gaps.size() - 1;
    double const kappa = opts.viscosity;
    TridiagonalMatrix m;
    m.diag.resize(n);
    m.lower.resize(n - 1);
    m.upper.resize(n - 1);
    for (std::size_t k = 0; k < n; ++k)
    {
        m.diag[k] = kappa / gaps[k] + kappa / gaps[k + 1];
        if (k + 1 < n)
        {
            m.upper[k] = -kappa / gaps[k + 1];
            m.lower[k] = m.upper[k];
        }
    }
    return m;
}

TridiagonalMatrix build_matrix(ParticleConfiguration const& config, SolveOptions const& opts)
{
    return build_matrix(config.gaps(), opts);
}

DiscreteSolution solve_strict(std::span<double const> gaps, std::span<double const> forces,
                              double u_left, double u_right, SolveOptions const& opts)
{
    require_force_count(gaps.size(), forces);
    auto m = build_matrix(gaps, opts);
    std::vector<double> rhs(forces.begin(), forces.end());
    rhs.front() += opts.viscosity * u_left / gaps.front();
    rhs.back() += opts.viscosity * u_right / gaps.back();
    std::vector<double> links(gaps.size());
    for (std::size_t j = 0; j < gaps.size(); ++j)
        links[j] = opts.viscosity / gaps[j];
    auto x = solve_chain_laplacian(links, rhs);

    DiscreteSolution sol;
    sol.solver = SolverKind::thomas;
    sol.residual = residual_max_norm(m, x, rhs);
    sol.velocities.reserve(x.size() + 2);
    sol.velocities.push_back(u_left);
    sol.velocities.insert(sol.velocities.end(), x.begin(), x.end());
    sol.velocities.push_back(u_right);
    return sol;
}

DiscreteSolution solve_strict(ParticleConfiguration const& config, std::span<double const> forces,
                              double u_left, double u_right, SolveOptions const& opts)
{
    return solve_strict(config.gaps(), forces, u_left, u_right, opts);
}

//---------------------------------------------------------------------------//
DiscreteSolution solve_explicit(ParticleConfiguration const& config, std::span<double const> forces,
                                SolveOptions const& opts)
{
    std::size_t const big_n = config.num_intervals();
    require_force_count(big_n, forces);
    if (check_feasibility(config, opts.contact_tolerance) == FeasibilityClass::infeasible)
        throw InputError("solve_explicit: configuration is infeasible");

    auto d = config.contact_gaps(opts.contact_tolerance);
    std::vector<double> vacuum(big_n);  // D_1..D_N
    kernels::inclusive_scan(d, vacuum);
    double const total = vacuum.back();

    DiscreteSolution sol;
    sol.solver = SolverKind::explicit_formula;
    sol.velocities.assign(big_n + 1, 0.0);
    if (total == 0.0)
    {
        sol.rigid_global = true;
        return sol;
    }

    std::size_t const n = big_n - 1;
    std::vector<double> lower_terms(n);
    std::vector<double> upper_terms(n);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k)
    {
        lower_terms[k] = vacuum[k] * forces[k];
        upper_terms[k] = (total - vacuum[k]) * forces[k];
    }
    std::vector<double> lower_sum(n);  // sum_{k <= i} D_k f_k
    std::vector<double> upper_sum(n);  // sum_{k >= i} (D_N - D_k) f_k
    kernels::inclusive_scan(lower_terms, lower_sum);
    kernels::inclusive_suffix_scan(upper_terms, upper_sum);

    double const scale = 1.0 / (opts.viscosity * total);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k)
    {
        double const above = k + 1 < n ? upper_sum[k + 1] : 0.0;
        sol.velocities[k + 1]
            = scale * ((total - vacuum[k]) * lower_sum[k] + vacuum[k] * above);
    }

    sol.residual = balance_residual(config, detect_clusters(config, opts.contact_tolerance),
                                    sol.velocities, forces, opts);
    return sol;
}

//---------------------------------------------------------------------------//
DiscreteSolution solve_clustered(ParticleConfiguration const& config,
                                 ClusterDecomposition const& clusters,
                                 std::span<double const> forces, double u_left, double u_right,
                                 SolveOptions const& opts)
{
    require_force_count(config.num_intervals(), forces);
    auto links = link_data(config, clusters, opts);
    auto loads = node_loads(forces);

    ChainSystem system;
    system.conductance = links.conductance;
    system.rigid = links.rigid;
    system.loads = loads;
    system.left_value = u_left;
    system.right_value = u_right;
    auto chain = solve_chain(system);

    DiscreteSolution sol;
    sol.solver = SolverKind::clustered;
    sol.velocities = std::move(chain.values);
    sol.residual = chain.residual;
    sol.rigid_global = chain.rigid_global;
    sol.cohesion = cohesion_forces(config, clusters, sol.velocities, forces, opts);
    return sol;
}

DiscreteSolution solve(ParticleConfiguration const& config, std::span<double const> forces,
                       double u_left, double u_right, SolveOptions const& opts)
{
    switch (check_feasibility(config, opts.contact_tolerance))
    {
        case FeasibilityClass::strictly_feasible:
            return solve_strict(config, forces, u_left, u_right, opts);
        case FeasibilityClass::feasible:
            return solve_clustered(config, detect_clusters(config, opts.contact_tolerance),
                                   forces, u_left, u_right, opts);
        case FeasibilityClass::infeasible:
            break;
    }
    throw InputError("solve: configuration is infeasible (spheres overlap)");
}

std::vector<ClusterForces> cohesion_forces(ParticleConfiguration const& config,
                                           ClusterDecomposition const& clusters,
                                           std::span<double const> velocities,
                                           std::span<double const> forces,
                                           SolveOptions const& opts)
{
    require_force_count(config.num_intervals(), forces);
    auto links = link_data(config, clusters, opts);
    auto loads = node_loads(forces);
    auto flux = chain_fluxes(links.conductance, links.rigid, loads, velocities, clusters.clusters);

    std::vector<ClusterForces> out;
    out.reserve(clusters.clusters.size());
    for (auto const& c : clusters.clusters)
    {
        // Links c.first+1 .. c.last sit at flux indices c.first .. c.last-1.
        out.push_back({c, {flux.begin() + c.first, flux.begin() + c.last}});
    }
    return out;
}

//---------------------------------------------------------------------------//
PiecewiseAffineField interpolant(ParticleConfiguration const& config,
                                 DiscreteSolution const& solution)
{
    auto q = config.centers();
    return PiecewiseAffineField({q.begin(), q.end()}, solution.velocities);
}

PiecewiseConstantField w_field(ParticleConfiguration const& config,
                               DiscreteSolution const& solution, SolveOptions const& opts)
{
    auto q = config.centers();
    auto d = config.contact_gaps(opts.contact_tolerance);
    auto const& u = solution.velocities;
    std::vector<double> w(d.size(), 0.0);
    for (std::size_t j = 0; j < d.size(); ++j)
    {
        if (d[j] != 0.0)
            w[j] = (u[j + 1] - u[j]) / d[j];
    }
    for (auto const& c : solution.cohesion)
    {
        for (std::size_t k = 0; k < c.forces.size(); ++k)
            w[c.cluster.first + k] = c.forces[k] / opts.viscosity;
    }
    return PiecewiseConstantField({q.begin(), q.end()}, std::move(w));
}

std::optional<double> end_stress(ParticleConfiguration const& config,
                                 DiscreteSolution const& solution, SolveOptions const& opts)
{
    double total = 0.0;
    for (double g : config.contact_gaps(opts.contact_tolerance))
        total += g;
    if (total == 0.0)
        return std::nullopt;
    return opts.viscosity * (solution.velocities.front() - solution.velocities.back()) / total;
}

double balance_residual(ParticleConfiguration const& config, ClusterDecomposition const& clusters,
                        std::span<double const> velocities, std::span<double const> forces,
                        SolveOptions const& opts)
{
    std::size_t const last = config.num_intervals();
    auto d = config.contact_gaps(opts.contact_tolerance);
    double const kappa = opts.viscosity;
    auto flux = [&](std::size_t link) {
        return kappa * (velocities[link] - velocities[link - 1]) / d[link - 1];
    };

    double r = 0.0;
    auto check_block = [&](std::size_t first, std::size_t end) {
        if (first == 0 || end == last)
            return;
        double load = 0.0;
        for (std::size_t i = first; i <= end; ++i)
            load += forces[i - 1];
        r = std::max(r, std::abs(flux(end + 1) - flux(first) + load));
    };

    std::size_t next = 0;
    for (auto const& c : clusters.clusters)
    {
        for (; next < c.first; ++next)
            check_block(next, next);
        for (std::size_t i = c.first + 1; i <= c.last; ++i)
            r = std::max(r, std::abs(velocities[i] - velocities[c.first]));
        check_block(c.first, c.last);
        next = c.last + 1;
    }
    for (; next <= last; ++next)
        check_block(next, next);
    return r;
}

}  // namespace lubchain::discrete
