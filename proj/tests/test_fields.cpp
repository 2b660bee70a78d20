#include <doctest.h>

#include <cmath>

#include "lubchain/error.hpp"
#include "lubchain/fields.hpp"
#include "lubchain/format.hpp"

using namespace lubchain;
using doctest::Approx;

TEST_SUITE("fields")
{
TEST_CASE("piecewise constant evaluation is right-continuous")
{
    PiecewiseConstantField f({0.0, 0.25, 0.5, 1.0}, {1.0, -2.0, 3.0});
    CHECK(f(0.0) == 1.0);
    CHECK(f(0.1) == 1.0);
    CHECK(f(0.25) == -2.0);
    CHECK(f(0.5) == 3.0);
    CHECK(f(1.0) == 3.0);
    CHECK(f.num_pieces() == 3);
}

TEST_CASE("piecewise constant integrals")
{
    PiecewiseConstantField f({0.0, 0.25, 0.5, 1.0}, {1.0, -2.0, 3.0});
    CHECK(f.integral() == Approx(0.25 - 0.5 + 1.5));
    CHECK(f.integral(0.1, 0.3) == Approx(0.15 - 0.1));
    CHECK(f.integral(0.3, 0.1) == Approx(-(0.15 - 0.1)));
    CHECK(f.integral(0.7, 0.7) == 0.0);
    // antiderivative of x -> x^2 / 2
    double const against = f.integrate_against([](double x) { return 0.5 * x * x; });
    double const expected = 1.0 * (0.03125) - 2.0 * (0.125 - 0.03125) + 3.0 * (0.5 - 0.125);
    CHECK(against == Approx(expected));
}

TEST_CASE("sup norm, total variation and simplification")
{
    PiecewiseConstantField f({0.0, 0.2, 0.4, 0.6, 1.0}, {1.0, 1.0, -3.0, 0.5});
    CHECK(f.sup_norm() == 3.0);
    CHECK(f.total_variation() == Approx(0.0 + 4.0 + 3.5));
    auto s = f.simplified();
    CHECK(s.num_pieces() == 3);
    CHECK(s.integral() == Approx(f.integral()));
}

TEST_CASE("field construction rejects bad breakpoints")
{
    CHECK_THROWS_AS(PiecewiseConstantField({0.0, 0.5, 0.5, 1.0}, {1, 2, 3}), InputError);
    CHECK_THROWS_AS(PiecewiseConstantField({0.0, 1.0}, {1, 2}), InputError);
    CHECK_THROWS_AS(PiecewiseAffineField({0.0, 1.0}, {1.0}), InputError);
}

TEST_CASE("affine field evaluation and derivative")
{
    PiecewiseAffineField u({0.0, 0.5, 1.0}, {0.0, 0.15, 0.0});
    CHECK(u(0.25) == Approx(0.075));
    CHECK(u(0.5) == Approx(0.15));
    CHECK(u(0.75) == Approx(0.075));
    auto du = u.derivative();
    CHECK(du(0.1) == Approx(0.3));
    CHECK(du(0.9) == Approx(-0.3));
    CHECK(u.h1_seminorm_squared() == Approx(0.09));
    CHECK(u.sup_norm() == Approx(0.15));
}

TEST_CASE("l2 distance is exact for piecewise affine fields")
{
    // a = x, b = 0 on [0,1]: ||x||^2 = 1/3
    PiecewiseAffineField a({0.0, 1.0}, {0.0, 1.0});
    PiecewiseAffineField zero({0.0, 0.3, 1.0}, {0.0, 0.0, 0.0});
    CHECK(l2_distance(a, zero) == Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(l2_distance(zero, a) == Approx(l2_distance(a, zero)).epsilon(1e-15));
    CHECK(l2_distance(a, a) == 0.0);
    // Tent vs linear on different grids, by hand on [0,0.5] and [0.5,1]:
    // difference is 0.3x - x = -0.7x on [0,0.5]; 0.3 - 0.3x - x on [0.5,1].
    PiecewiseAffineField tent({0.0, 0.5, 1.0}, {0.0, 0.15, 0.0});
    double const left = 0.49 * std::pow(0.5, 3) / 3.0;
    // integrand (0.3 - 1.3x)^2 on [0.5,1]: antiderivative -(0.3-1.3x)^3 / 3.9
    auto g = [](double x) { return -std::pow(0.3 - 1.3 * x, 3) / 3.9; };
    double const right = g(1.0) - g(0.5);
    CHECK(l2_distance(tent, a) == Approx(std::sqrt(left + right)).epsilon(1e-14));
}

TEST_CASE("merge, difference and product")
{
    std::vector<double> a{0.0, 0.5, 1.0};
    std::vector<double> b{0.0, 0.25, 0.5, 1.0};
    auto m = merge_breakpoints(a, b);
    CHECK(m == std::vector<double>{0.0, 0.25, 0.5, 1.0});
    PiecewiseConstantField f({0.0, 0.5, 1.0}, {1.0, 2.0});
    PiecewiseConstantField g({0.0, 0.25, 1.0}, {4.0, -1.0});
    auto d = difference(f, g);
    CHECK(d(0.1) == -3.0);
    CHECK(d(0.3) == 2.0);
    CHECK(d(0.7) == 3.0);
    CHECK(integrate_product(f, g) == Approx(0.25 * 4.0 + 0.25 * -1.0 + 0.5 * -2.0));
}

TEST_CASE("number formatting round-trips")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::stod(format_number(M_PI)) == M_PI);
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}
}
