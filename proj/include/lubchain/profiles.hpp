#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fields.hpp"

namespace lubchain {

//---------------------------------------------------------------------------//
/*!
 * Test function with closed-form value, derivative and antiderivative:
 * monomials x^p and sines sin(k pi x).
 */
class TestFunction
{
  public:
    enum class Kind
    {
        monomial,
        sine
    };

    static TestFunction monomial(int power);
    static TestFunction sine(int k);
    /// Parses "1", "x", "x^2", "x^3", "sin(2pi x)".
    static TestFunction parse(std::string const& name);

    Kind kind() const { return kind_; }
    int index() const { return index_; }
    std::string name() const;

    double operator()(double x) const;
    double derivative(double x) const;
    double antiderivative(double x) const;

    /// Exact integral of a piecewise-constant field against this function.
    double pair(PiecewiseConstantField const& field) const;

  private:
    TestFunction(Kind kind, int index) : kind_(kind), index_(index) {}

    Kind kind_;
    int index_;
};

/// {1, x, x^2, x^3, sin(k pi x) for k = 1..5}.
std::vector<TestFunction> default_test_family();

//---------------------------------------------------------------------------//
/// Gauss-Legendre integral of a smooth integrand on [a, b].
double integrate_smooth(std::function<double(double)> const& f, double a, double b,
                        int subintervals = 1);

//---------------------------------------------------------------------------//
/*!
 * Solid fraction rho on [0, 1], values in [0, 1].
 *
 * Constant, piecewise constant (step or tabulated), or a cos^2 bump
 * rho(x) = base + (peak - base) cos^2(pi (x - center) / width) on
 * |x - center| < width / 2 and base elsewhere.
 */
class DensityProfile
{
  public:
    struct Constant
    {
        double value;
    };
    struct Piecewise
    {
        PiecewiseConstantField field;
        bool tabulated;
    };
    struct Bump
    {
        double center;
        double width;
        double peak;
        double base;
    };
    struct StepPiece
    {
        double from;
        double to;
        double value;
    };

    static DensityProfile constant(double value);
    static DensityProfile step(double background, std::vector<StepPiece> const& pieces);
    static DensityProfile tabulated(PiecewiseConstantField field);
    static DensityProfile bump(double center, double width, double peak, double base = 0.0);

    std::string kind() const;
    bool is_piecewise_constant() const;
    std::variant<Constant, Piecewise, Bump> const& data() const { return data_; }

    double operator()(double x) const;
    /// S(x) = integral of rho over [0, x].
    double cumulative(double x) const;
    /// M = S(1).
    double total() const { return cumulative(1.0); }
    /// Leftmost x with S(x) = s, for s in [0, M].
    double inverse_cumulative(double s) const;

    /// Integral of 1/(1 - rho) over [a, b]; +inf where rho = 1 on a
    /// set of positive measure. [a, b] must not straddle a breakpoint.
    double inverse_vacuum_integral(double a, double b) const;

    /// rho >= 1 - threshold on the whole of [a, b] (single-piece interval).
    bool rigid_on(double a, double b, double threshold) const;

    /// Interior points where rho or its expression changes.
    std::vector<double> breakpoints() const;

    /// Integral of rho * g over [0, 1]; exact for piecewise-constant rho.
    double integrate_weighted(std::function<double(double)> const& g) const;

    /// Integral of rho * phi.
    double pair(TestFunction const& phi) const;

  private:
    explicit DensityProfile(std::variant<Constant, Piecewise, Bump> data);

    std::variant<Constant, Piecewise, Bump> data_;
};

//---------------------------------------------------------------------------//
/*!
 * Force density f on [0, 1]: constant, polynomial, c sin(k pi x), or
 * piecewise constant. Every kind has closed-form first and second
 * antiderivatives (both vanishing at 0).
 */
class ForceProfile
{
  public:
    struct Constant
    {
        double value;
    };
    struct Polynomial
    {
        std::vector<double> coefficients;  // c_0 + c_1 x + ...
    };
    struct Sine
    {
        double amplitude;
        int k;
    };
    struct Piecewise
    {
        PiecewiseConstantField field;
        bool tabulated;
    };

    static ForceProfile constant(double value);
    static ForceProfile polynomial(std::vector<double> coefficients);
    static ForceProfile sine(double amplitude, int k);
    static ForceProfile step(double background,
                             std::vector<DensityProfile::StepPiece> const& pieces);
    static ForceProfile tabulated(PiecewiseConstantField field);

    std::string kind() const;
    std::variant<Constant, Polynomial, Sine, Piecewise> const& data() const { return data_; }

    double operator()(double x) const;
    /// F(x) = integral of f over [0, x].
    double antiderivative(double x) const;
    /// integral of F over [0, x].
    double second_antiderivative(double x) const;
    /// Average of f over [a, b], a < b.
    double average(double a, double b) const;

    double l1_norm() const;
    std::vector<double> breakpoints() const;

  private:
    explicit ForceProfile(std::variant<Constant, Polynomial, Sine, Piecewise> data);

    std::variant<Constant, Polynomial, Sine, Piecewise> data_;
};

}  // namespace lubchain
