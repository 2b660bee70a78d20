#pragma once

#include <span>
#include <vector>

#include "geometry.hpp"
#include "tridiagonal.hpp"

// Serial reference implementations kept for testing and benchmarking the
// parallel kernels. None of these share code with the production paths.
namespace lubchain::reference {

/// Row-major dense matrix.
struct DenseMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

DenseMatrix to_dense(TridiagonalMatrix const& m);

/// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(DenseMatrix a, std::vector<double> rhs);

/// Closed-form discrete solution (walls at rest) with plain serial sums.
/// Returns interior velocities u_1..u_{N-1}.
std::vector<double> explicit_solution_serial(std::span<double const> gaps,
                                             std::span<double const> forces);

/// Serial inclusive prefix sum.
std::vector<double> inclusive_scan_serial(std::span<double const> in);

/// Sphere averages by composite Simpson on 2 * panels subintervals.
std::vector<double> sample_forces_simpson(ParticleConfiguration const& config,
                                          ForceProfile const& f, int panels = 64);

}  // namespace lubchain::reference
