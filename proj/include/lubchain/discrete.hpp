#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chain.hpp"
#include "fields.hpp"
#include "geometry.hpp"
#include "tridiagonal.hpp"

namespace lubchain::discrete {

struct SolveOptions
{
    /// Lubrication prefactor kappa; every interaction is kappa (u_j - u_i) / d.
    double viscosity = 1.0;
    double contact_tolerance = kContactTolerance;
};

enum class SolverKind
{
    thomas,
    explicit_formula,
    clustered
};

char const* to_string(SolverKind kind);

/// Cohesion forces beta_{first+1..last} inside one cluster.
struct ClusterForces
{
    NodeRange cluster;
    std::vector<double> forces;
};

/*!
 * Velocities of all particles 0..N plus the cohesion forces of every
 * cluster. The residual is the max-norm defect of the force balance that
 * was solved.
 */
struct DiscreteSolution
{
    std::vector<double> velocities;
    std::vector<ClusterForces> cohesion;
    SolverKind solver = SolverKind::thomas;
    double residual = 0.0;
    bool rigid_global = false;
};

/// Stiffness A(q) of a strictly feasible configuration; throws SolverError
/// on contact.
TridiagonalMatrix build_matrix(ParticleConfiguration const& config, SolveOptions const& opts = {});
TridiagonalMatrix build_matrix(std::span<double const> gaps, SolveOptions const& opts = {});

/// A u = f + b by Thomas elimination; strictly feasible only.
DiscreteSolution solve_strict(ParticleConfiguration const& config, std::span<double const> forces,
                              double u_left = 0.0, double u_right = 0.0,
                              SolveOptions const& opts = {});
/// Same on a bare gap vector d_1..d_N (used for regularized gaps).
DiscreteSolution solve_strict(std::span<double const> gaps, std::span<double const> forces,
                              double u_left = 0.0, double u_right = 0.0,
                              SolveOptions const& opts = {});

/// Closed-form solution with walls at rest, two parallel prefix scans.
/// Valid with contacts; with no vacuum at all returns u = 0, rigid_global.
DiscreteSolution solve_explicit(ParticleConfiguration const& config, std::span<double const> forces,
                                SolveOptions const& opts = {});

/// One unknown per cluster and per free particle.
DiscreteSolution solve_clustered(ParticleConfiguration const& config,
                                 ClusterDecomposition const& clusters,
                                 std::span<double const> forces, double u_left = 0.0,
                                 double u_right = 0.0, SolveOptions const& opts = {});

/// Thomas when strictly feasible, cluster reduction otherwise.
DiscreteSolution solve(ParticleConfiguration const& config, std::span<double const> forces,
                       double u_left = 0.0, double u_right = 0.0, SolveOptions const& opts = {});

/// beta by substitution through each cluster; SolverError if the velocities
/// do not satisfy the cluster balance.
std::vector<ClusterForces> cohesion_forces(ParticleConfiguration const& config,
                                           ClusterDecomposition const& clusters,
                                           std::span<double const> velocities,
                                           std::span<double const> forces,
                                           SolveOptions const& opts = {});

/// u^eps: affine between consecutive centers.
PiecewiseAffineField interpolant(ParticleConfiguration const& config,
                                 DiscreteSolution const& solution);

/// w^eps: (u_i - u_{i-1}) / d_i on elastic intervals, beta_i inside clusters.
PiecewiseConstantField w_field(ParticleConfiguration const& config,
                               DiscreteSolution const& solution, SolveOptions const& opts = {});

/// Force exerted on the last particle when f = 0: (u_0 - u_N) / D_N.
/// Empty when there is no vacuum (D_N = 0).
std::optional<double> end_stress(ParticleConfiguration const& config,
                                 DiscreteSolution const& solution, SolveOptions const& opts = {});

/// Max-norm defect of the clustered balance for arbitrary velocities.
double balance_residual(ParticleConfiguration const& config, ClusterDecomposition const& clusters,
                        std::span<double const> velocities, std::span<double const> forces,
                        SolveOptions const& opts = {});

}  // namespace lubchain::discrete
