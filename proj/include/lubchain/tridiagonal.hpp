#pragma once

#include <span>
#include <vector>

namespace lubchain {

/*!
 * Square tridiagonal matrix stored by diagonals.
 *
 * Row i holds lower[i-1], diag[i], upper[i]; lower and upper have one entry
 * fewer than diag.
 */
struct TridiagonalMatrix
{
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const { return diag.size(); }

    std::vector<double> apply(std::span<double const> x) const;
    bool is_symmetric() const;
};

/// Thomas elimination without pivoting; intended for diagonally dominant
/// systems. Throws SolverError on a zero pivot.
std::vector<double> solve_thomas(TridiagonalMatrix const& m, std::span<double const> rhs);

/*!
 * Chain with fixed ends: interior nodes 1..n joined by links c_1..c_{n+1},
 * matrix diag c_k + c_{k+1}, off-diagonal -c_{k+1}.
 *
 * Same elimination as solve_thomas, but the pivot of row k is formed as
 * c_{k+1} + t_k with t_k the series conductance of links 1..k. No pivot
 * is a difference, which keeps the solve accurate when the condition
 * number grows like n^2.
 */
std::vector<double> solve_chain_laplacian(std::span<double const> links,
                                          std::span<double const> rhs);

/// Max-norm of m x - rhs.
double residual_max_norm(TridiagonalMatrix const& m, std::span<double const> x,
                         std::span<double const> rhs);

}  // namespace lubchain
