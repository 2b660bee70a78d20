#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chain.hpp"
#include "fields.hpp"
#include "profiles.hpp"

namespace lubchain {

/// Absolute contact tolerance on the unit domain: gaps in (-tau, tau] count
/// as exact contact.
inline constexpr double kContactTolerance = 1e-12;

//---------------------------------------------------------------------------//
/*!
 * Aligned spheres of common radius on [0, 1].
 *
 * Particle 0 sits at 0 and particle N at 1; the interior centers
 * q_1..q_{N-1} are stored. Gap d_i = q_i - q_{i-1} - 2 eps, i = 1..N.
 */
class ParticleConfiguration
{
  public:
    ParticleConfiguration(double radius, std::vector<double> interior_centers);

    /// Centers from gaps d_1..d_N; the radius must satisfy
    /// sum(d) + 2 N eps = 1 up to rounding.
    static ParticleConfiguration from_gaps(double radius, std::span<double const> gaps);

    double radius() const { return radius_; }
    /// N: index of the right wall particle.
    std::size_t num_intervals() const { return centers_.size() - 1; }
    /// All centers q_0 = 0, ..., q_N = 1.
    std::span<double const> centers() const { return centers_; }
    double center(std::size_t i) const { return centers_[i]; }

    /// Raw gaps d_1..d_N (stored 0-based).
    std::vector<double> gaps() const;
    /// Gaps with |d| <= tau snapped to exact zero.
    std::vector<double> contact_gaps(double tau = kContactTolerance) const;

  private:
    double radius_;
    std::vector<double> centers_;
};

enum class FeasibilityClass
{
    infeasible,
    feasible,
    strictly_feasible
};

char const* to_string(FeasibilityClass c);

/// Particle indices partitioned into maximal contact runs and singletons.
struct ClusterDecomposition
{
    std::vector<NodeRange> clusters;
    std::vector<std::size_t> singletons;

    bool empty() const { return clusters.empty(); }
    /// Per-link rigid flags (link i joins particles i-1 and i).
    std::vector<unsigned char> contact_links(std::size_t num_intervals) const;
};

FeasibilityClass check_feasibility(ParticleConfiguration const& config,
                                   double tau = kContactTolerance);

ClusterDecomposition detect_clusters(ParticleConfiguration const& config,
                                     double tau = kContactTolerance);

/// Indicator of the solid phase; touching spheres share one piece.
PiecewiseConstantField characteristic_function(ParticleConfiguration const& config,
                                               double tau = kContactTolerance);

/// 1 - d_i / (q_i - q_{i-1}) on (q_{i-1}, q_i).
PiecewiseConstantField coarse_density(ParticleConfiguration const& config,
                                      double tau = kContactTolerance);

/// Deterministic configuration whose solid indicator approximates rho.
struct GeneratedConfiguration
{
    ParticleConfiguration config;
    double nominal_radius;
    double mass;  // M, integral of rho
};

GeneratedConfiguration generate_configuration(DensityProfile const& rho, double radius);

/// f_i^eps: average of f over each interior sphere, i = 1..N-1.
std::vector<double> sample_forces(ParticleConfiguration const& config, ForceProfile const& f);

/// Per-particle loads 2 eps f_i^eps, i = 1..N-1: the total force each
/// sphere receives from the density f.
std::vector<double> particle_loads(ParticleConfiguration const& config,
                                   std::span<double const> sampled_forces);

}  // namespace lubchain
