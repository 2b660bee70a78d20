#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lubchain {

//---------------------------------------------------------------------------//
/*!
 * Piecewise-constant function on [x_0, x_m].
 *
 * Piece j (0-based) carries values()[j] on (x_j, x_{j+1}). Evaluation at an
 * interior breakpoint returns the right limit; evaluation at the right end
 * returns the last value.
 */
class PiecewiseConstantField
{
  public:
    PiecewiseConstantField(std::vector<double> breakpoints,
                           std::vector<double> values);

    static PiecewiseConstantField
    constant(double value, double left = 0.0, double right = 1.0);

    std::span<double const> breakpoints() const { return breakpoints_; }
    std::span<double const> values() const { return values_; }
    std::size_t num_pieces() const { return values_.size(); }
    double left() const { return breakpoints_.front(); }
    double right() const { return breakpoints_.back(); }

    double operator()(double x) const;

    double integral() const;
    double integral(double a, double b) const;

    /// sum_j v_j * (A(x_{j+1}) - A(x_j)) for an antiderivative A.
    double integrate_against(std::function<double(double)> const& antiderivative) const;

    double sup_norm() const;
    /// Sum of |jumps| at interior breakpoints.
    double total_variation() const;

    /// Merge adjacent pieces with identical values.
    PiecewiseConstantField simplified() const;

  private:
    std::size_t locate(double x) const;

    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

//---------------------------------------------------------------------------//
/*!
 * Continuous piecewise-affine function given by node/value pairs.
 */
class PiecewiseAffineField
{
  public:
    PiecewiseAffineField(std::vector<double> nodes, std::vector<double> values);

    std::span<double const> nodes() const { return nodes_; }
    std::span<double const> values() const { return values_; }
    std::size_t num_nodes() const { return nodes_.size(); }

    double operator()(double x) const;

    /// Elementwise slopes as a piecewise-constant field.
    PiecewiseConstantField derivative() const;

    /// Squared H^1 seminorm (integral of the squared slope).
    double h1_seminorm_squared() const;
    double sup_norm() const;

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// Sorted union of two breakpoint sets (exact duplicates removed).
std::vector<double> merge_breakpoints(std::span<double const> a,
                                      std::span<double const> b);

/// Pointwise a - b on the merged breakpoints. Domains must coincide.
PiecewiseConstantField difference(PiecewiseConstantField const& a,
                                  PiecewiseConstantField const& b);

/// Exact integral of a * b for two piecewise-constant fields.
double integrate_product(PiecewiseConstantField const& a,
                         PiecewiseConstantField const& b);

/// Exact L2 distance of two piecewise-affine fields on a common interval.
double l2_distance(PiecewiseAffineField const& a, PiecewiseAffineField const& b);

}  // namespace lubchain
