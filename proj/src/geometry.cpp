#include "lubchain/geometry.hpp"

#include <cmath>
#include <sstream>

#include "lubchain/error.hpp"

namespace lubchain {

//---------------------------------------------------------------------------//
ParticleConfiguration::ParticleConfiguration(double radius, std::vector<double> interior_centers)
    : radius_(radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InputError("particle radius must be positive");
    if (interior_centers.empty())
        throw InputError("configuration needs at least one interior particle");
    centers_.reserve(interior_centers.size() + 2);
    centers_.push_back(0.0);
    centers_.insert(centers_.end(), interior_centers.begin(), interior_centers.end());
    centers_.push_back(1.0);
    for (std::size_t i = 1; i < centers_.size(); ++i)
    {
        if (!(centers_[i] > centers_[i - 1]))
        {
            std::ostringstream msg;
            msg << "centers must be strictly increasing inside (0, 1); violated at index " << i;
            throw InputError(msg.str());
        }
    }
}

ParticleConfiguration ParticleConfiguration::from_gaps(double radius, std::span<double const> gaps)
{
    if (gaps.size() < 2)
        throw InputError("from_gaps needs at least two gaps");
    std::vector<double> interior(gaps.size() - 1);
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
    {
        q += gaps[i] + 2.0 * radius;
        interior[i] = q;
    }
    return ParticleConfiguration(radius, std::move(interior));
}

std::vector<double> ParticleConfiguration::gaps() const
{
    std::vector<double> d(num_intervals());
    for (std::size_t i = 1; i < centers_.size(); ++i)
        d[i - 1] = centers_[i] - centers_[i - 1] - 2.0 * radius_;
    return d;
}

std::vector<double> ParticleConfiguration::contact_gaps(double tau) const
{
    auto d = gaps();
    for (double& g : d)
    {
        if (std::abs(g) <= tau)
            g = 0.0;
    }
    return d;
}

//---------------------------------------------------------------------------//
char const* to_string(FeasibilityClass c)
{
    switch (c)
    {
        case FeasibilityClass::infeasible:
            return "infeasible";
        case FeasibilityClass::feasible:
            return "feasible";
        case FeasibilityClass::strictly_feasible:
            return "strictly_feasible";
    }
    return "?";
}

std::vector<unsigned char> ClusterDecomposition::contact_links(std::size_t num_intervals) const
{
    std::vector<unsigned char> rigid(num_intervals, 0);
    for (auto const& c : clusters)
    {
        for (std::size_t link = c.first + 1; link <= c.last; ++link)
            rigid[link - 1] = 1;
    }
    return rigid;
}

FeasibilityClass check_feasibility(ParticleConfiguration const& config, double tau)
{
    bool contact = false;
    for (double d : config.gaps())
    {
        if (d < -tau)
            return FeasibilityClass::infeasible;
        if (d <= tau)
            contact = true;
    }
    return contact ? FeasibilityClass::feasible : FeasibilityClass::strictly_feasible;
}

namespace {

void require_feasible(ParticleConfiguration const& config, double tau, char const* who)
{
    if (check_feasibility(config, tau) == FeasibilityClass::infeasible)
        throw InputError(std::string(who) + ": configuration is infeasible (spheres overlap)");
}

}  // namespace

ClusterDecomposition detect_clusters(ParticleConfiguration const& config, double tau)
{
    require_feasible(config, tau, "detect_clusters");
    auto d = config.contact_gaps(tau);
    ClusterDecomposition out;
    std::size_t const last = config.num_intervals();
    std::size_t i = 0;
    while (i <= last)
    {
        std::size_t j = i;
        while (j < last && d[j] == 0.0)
            ++j;
        if (j > i)
        {
            out.clusters.push_back({i, j});
        }
        else
        {
            out.singletons.push_back(i);
        }
        i = j + 1;
    }
    return out;
}

PiecewiseConstantField characteristic_function(ParticleConfiguration const& config, double tau)
{
    require_feasible(config, tau, "characteristic_function");
    double const eps = config.radius();
    auto q = config.centers();
    auto d = config.contact_gaps(tau);
    std::size_t const last = config.num_intervals();

    std::vector<double> bp{0.0};
    std::vector<double> vals;
    // Solid run opened by the left wall particle.
    for (std::size_t i = 1; i <= last; ++i)
    {
        if (d[i - 1] > 0.0)
        {
            vals.push_back(1.0);
            bp.push_back(q[i - 1] + eps);
            vals.push_back(0.0);
            bp.push_back(q[i] - eps);
        }
    }
    vals.push_back(1.0);
    bp.push_back(1.0);
    return PiecewiseConstantField(std::move(bp), std::move(vals));
}

PiecewiseConstantField coarse_density(ParticleConfiguration const& config, double tau)
{
    require_feasible(config, tau, "coarse_density");
    auto q = config.centers();
    auto d = config.contact_gaps(tau);
    std::vector<double> vals(d.size());
    for (std::size_t i = 1; i < q.size(); ++i)
        vals[i - 1] = 1.0 - d[i - 1] / (q[i] - q[i - 1]);
    return PiecewiseConstantField({q.begin(), q.end()}, std::move(vals));
}

GeneratedConfiguration generate_configuration(DensityProfile const& rho, double radius)
{
    if (!(radius > 0.0))
        throw InputError("generate_configuration: radius must be positive");
    double const mass = rho.total();
    if (!(mass > 0.0))
        throw InputError("generate_configuration: density has zero mass");
    auto const n = std::llround(mass / (2.0 * radius));
    if (n < 2)
    {
        std::ostringstream msg;
        msg << "generate_configuration: radius " << radius << " leaves fewer than 2 intervals";
        throw InputError(msg.str());
    }
    double const eps_eff = mass / (2.0 * static_cast<double>(n));
    std::vector<double> interior(static_cast<std::size_t>(n - 1));
#pragma omp parallel for schedule(static)
    for (long long i = 1; i < n; ++i)
        interior[static_cast<std::size_t>(i - 1)] = rho.inverse_cumulative(2.0 * eps_eff * double(i));
    return {ParticleConfiguration(eps_eff, std::move(interior)), radius, mass};
}

std::vector<double> sample_forces(ParticleConfiguration const& config, ForceProfile const& f)
{
    double const eps = config.radius();
    auto q = config.centers();
    std::size_t const m = config.num_intervals() - 1;
    std::vector<double> out(m);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
        out[i] = f.average(q[i + 1] - eps, q[i + 1] + eps);
    return out;
}

std::vector<double> particle_loads(ParticleConfiguration const& config,
                                   std::span<double const> sampled_forces)
{
    if (sampled_forces.size() + 1 != config.num_intervals())
        throw InputError("particle_loads: expected one sampled force per interior particle");
    std::vector<double> loads(sampled_forces.begin(), sampled_forces.end());
    double const scale = 2.0 * config.radius();
    for (double& v : loads)
        v *= scale;
    return loads;
}

}  // namespace lubchain
