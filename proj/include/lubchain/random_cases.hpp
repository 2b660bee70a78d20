#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "profiles.hpp"
#include "rng.hpp"

// Seeded random inputs for the property suites.
namespace lubchain::random_cases {

/// N intervals, gaps proportional to U(0.1, 1), radius s / (2N) with
/// s ~ U(0.1, 0.9).
ParticleConfiguration strict_configuration(Xoshiro256& rng, std::size_t num_intervals);

/// Like strict_configuration but with `num_clusters` disjoint contact runs
/// of 2 to 4 particles; runs may touch either wall.
ParticleConfiguration clustered_configuration(Xoshiro256& rng, std::size_t num_intervals,
                                              std::size_t num_clusters);

/// Raw per-particle loads U(-1, 1), one per interior particle.
std::vector<double> loads(Xoshiro256& rng, std::size_t count);

/// Piecewise-constant force with 1 to 8 pieces, values U(-2, 2).
ForceProfile piecewise_force(Xoshiro256& rng);

}  // namespace lubchain::random_cases
