#include "lubchain/random_cases.hpp"

#include <algorithm>
#include <cmath>

#include "lubchain/error.hpp"

namespace lubchain::random_cases {
namespace {

std::vector<double> scaled_gaps(Xoshiro256& rng, std::size_t n, double total)
{
    std::vector<double> gaps(n);
    double sum = 0.0;
    for (double& g : gaps)
    {
        g = rng.uniform(0.1, 1.0);
        sum += g;
    }
    for (double& g : gaps)
        g *= total / sum;
    return gaps;
}

}  // namespace

ParticleConfiguration strict_configuration(Xoshiro256& rng, std::size_t num_intervals)
{
    if (num_intervals < 2)
        throw InputError("strict_configuration: need N >= 2");
    double const solid = rng.uniform(0.1, 0.9);
    double const radius = solid / (2.0 * double(num_intervals));
    auto gaps = scaled_gaps(rng, num_intervals, 1.0 - solid);
    return ParticleConfiguration::from_gaps(radius, gaps);
}

ParticleConfiguration clustered_configuration(Xoshiro256& rng, std::size_t num_intervals,
                                              std::size_t num_clusters)
{
    // Each run uses up to 3 contact links plus one separating free link.
    if (num_clusters == 0 || num_intervals < 4 * num_clusters + 1)
        throw InputError("clustered_configuration: too many clusters for N");
    std::size_t const n = num_intervals;

    std::vector<unsigned char> contact(n, 0);
    std::size_t placed = 0;
    while (placed < num_clusters)
    {
        std::size_t const len = rng.uniform_int(1, 3);
        std::size_t const start = rng.uniform_int(0, n - len);
        // Keep runs apart so that each one is a separate cluster.
        std::size_t const lo = start == 0 ? 0 : start - 1;
        std::size_t const hi = std::min(n - 1, start + len);
        bool clash = false;
        for (std::size_t j = lo; j <= hi; ++j)
            clash = clash || contact[j];
        // At least one free link must remain.
        std::size_t used = 0;
        for (auto c : contact)
            used += c;
        if (clash || used + len >= n)
            continue;
        for (std::size_t j = start; j < start + len; ++j)
            contact[j] = 1;
        ++placed;
    }

    double const solid = rng.uniform(0.1, 0.9);
    double const radius = solid / (2.0 * double(n));
    std::size_t free_links = 0;
    for (auto c : contact)
        free_links += !c;
    auto free_gaps = scaled_gaps(rng, free_links, 1.0 - solid);
    std::vector<double> gaps(n, 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (!contact[j])
            gaps[j] = free_gaps[k++];
    }
    return ParticleConfiguration::from_gaps(radius, gaps);
}

std::vector<double> loads(Xoshiro256& rng, std::size_t count)
{
    std::vector<double> out(count);
    for (double& v : out)
        v = rng.uniform(-1.0, 1.0);
    return out;
}

ForceProfile piecewise_force(Xoshiro256& rng)
{
    std::size_t const pieces = rng.uniform_int(1, 8);
    std::vector<double> bp{0.0, 1.0};
    while (bp.size() < pieces + 1)
    {
        double const x = rng.uniform(0.01, 0.99);
        if (std::none_of(bp.begin(), bp.end(), [&](double b) { return std::abs(b - x) < 1e-3; }))
            bp.push_back(x);
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> vals(pieces);
    for (double& v : vals)
        v = rng.uniform(-2.0, 2.0);
    return ForceProfile::tabulated(PiecewiseConstantField(std::move(bp), std::move(vals)));
}

}  // namespace lubchain::random_cases
