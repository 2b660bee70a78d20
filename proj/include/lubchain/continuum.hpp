#pragma once

#include <optional>
#include <vector>

#include "chain.hpp"
#include "fields.hpp"
#include "profiles.hpp"

namespace lubchain::continuum {

/// -( (1 - rho)^{-1} u' )' = rho f on (0, 1), u(0) = u(1) = 0.
struct MacroProblem
{
    DensityProfile density;
    ForceProfile force;
    int grid_size = 64;
    /// Elements with rho >= 1 - rigid_threshold carry infinite coefficient.
    double rigid_threshold = 1e-10;
};

struct MacroOptions
{
    /// Order in which rigid elements are merged; the solution must not
    /// depend on it.
    bool reverse_merge_order = false;
};

/*!
 * Galerkin solution on the grid: nodal values, elementwise flux
 * sigma = K u' (the constraint multiplier on rigid elements), and nodal
 * fluxes recovered from the element balance.
 */
struct MacroSolution
{
    PiecewiseAffineField field;
    PiecewiseConstantField flux;
    std::vector<double> nodal_flux;
    std::vector<NodeRange> rigid_groups;
    std::vector<unsigned char> rigid_elements;
    double energy = 0.0;
    bool rigid_global = false;
};

/// Uniform nodes i/n with every profile breakpoint inserted.
std::vector<double> build_grid(MacroProblem const& problem);

MacroSolution solve_macro(MacroProblem const& problem, MacroOptions const& opts = {});

/*!
 * J(v) = int K |v'|^2 - int rho f v (no 1/2 prefactor), +inf when v has a
 * nonzero slope on a set where rho = 1. The minimizer of this J is half the
 * solution of the macroscopic equation.
 */
double energy(MacroProblem const& problem, PiecewiseAffineField const& field);

/// max over free nodal groups of |int K u_h' Phi' - int rho f Phi|.
double galerkin_residual(MacroProblem const& problem, MacroSolution const& solution);

/*!
 * For every interior rigid inclusion [a, b]: |sigma(b) - sigma(a) +
 * int_a^b rho f| with sigma(a) recovered from the elastic element left of a
 * and sigma(b) from the one right of b. Returns the max over inclusions.
 */
double flux_balance_defect(MacroProblem const& problem, MacroSolution const& solution);

/*!
 * Exact solution by flux integration, available for piecewise-constant rho
 * (constant, step, tabulated) and any force profile:
 * sigma(x) = sigma(0) - int_0^x rho f,  u(x) = int_0^x (1 - rho) sigma,
 * with sigma(0) fixed by u(1) = 0.
 */
class AnalyticReference
{
  public:
    double value(double x) const;
    double flux(double x) const;
    /// u'(x) = (1 - rho) sigma, smooth inside every piece.
    double derivative(double x) const;
    /// Piece boundaries 0 = x_0 < ... < x_m = 1.
    std::vector<double> const& breakpoints() const { return breaks_; }
    bool rigid_global() const { return rigid_global_; }

    /// Nodal interpolant and element-mean flux on the given nodes.
    MacroSolution sample(std::vector<double> const& nodes) const;

  private:
    friend std::optional<AnalyticReference> analytic_reference(MacroProblem const& problem);

    AnalyticReference(ForceProfile force, std::vector<double> breaks, std::vector<double> rho);

    std::size_t piece_of(double x) const;
    /// P(x) = int_0^x rho f.
    double load(double x) const;
    /// int_{x_j}^x P for x in piece j.
    double load_integral(std::size_t j, double x) const;
    /// int_0^x sigma.
    double flux_integral(double x) const;

    ForceProfile force_;
    std::vector<double> breaks_;
    std::vector<double> rho_;
    std::vector<double> load_at_;   // P(x_j)
    std::vector<double> u_at_;      // u(x_j)
    std::vector<double> flux_int_;  // int_0^{x_j} sigma
    double flux0_ = 0.0;
    bool rigid_global_ = false;
};

/// Empty when rho is not piecewise constant.
std::optional<AnalyticReference> analytic_reference(MacroProblem const& problem);

}  // namespace lubchain::continuum
