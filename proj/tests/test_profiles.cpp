#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lubchain/error.hpp"
#include "lubchain/profiles.hpp"
#include "oracles.hpp"

using namespace lubchain;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_SUITE("profiles")
{
TEST_CASE("test functions: names, values and antiderivatives")
{
    auto family = default_test_family();
    REQUIRE(family.size() == 9);
    CHECK(family[0].name() == "1");
    CHECK(family[2].name() == "x^2");
    CHECK(family[4].name() == "sin(pi x)");
    CHECK(family[8].name() == "sin(5pi x)");
    for (auto const& phi : family)
    {
        CAPTURE(phi.name());
        CHECK(TestFunction::parse(phi.name()).name() == phi.name());
        double const integral = oracle::simpson([&](double x) { return phi(x); }, 0.2, 0.9);
        CHECK(phi.antiderivative(0.9) - phi.antiderivative(0.2) == Approx(integral).epsilon(1e-12));
        double const h = 1e-6;
        CHECK(phi.derivative(0.37) == Approx((phi(0.37 + h) - phi(0.37 - h)) / (2 * h)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(TestFunction::parse("cos(x)"), InputError);
}

TEST_CASE("test function pairing with a piecewise field")
{
    PiecewiseConstantField f({0.0, 0.3, 1.0}, {2.0, -1.0});
    auto phi = TestFunction::sine(2);
    double const expected = oracle::simpson_split([&](double x) { return f(x) * phi(x); }, 0.0, 1.0,
                                                  {0.3});
    CHECK(phi.pair(f) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("densities validate their values")
{
    CHECK_THROWS_AS(DensityProfile::constant(1.5), InputError);
    CHECK_THROWS_AS(DensityProfile::constant(-0.1), InputError);
    CHECK_THROWS_AS(DensityProfile::step(0.5, {{0.4, 0.6, 1.2}}), InputError);
    CHECK_THROWS_AS(DensityProfile::bump(0.5, 0.0, 0.8), InputError);
    CHECK_THROWS_AS(DensityProfile::tabulated(PiecewiseConstantField({0.0, 0.5}, {0.3})),
                    InputError);
}

TEST_CASE("density cumulative and inverse")
{
    auto c = DensityProfile::constant(0.5);
    CHECK(c.total() == Approx(0.5));
    CHECK(c.inverse_cumulative(0.25) == Approx(0.5));

    auto step = DensityProfile::step(0.5, {{0.4, 0.6, 1.0}});
    CHECK(step.total() == Approx(0.6));
    CHECK(step.cumulative(0.4) == Approx(0.2));
    CHECK(step.cumulative(0.5) == Approx(0.3));
    CHECK(step.inverse_cumulative(0.3) == Approx(0.5));
    CHECK(step.inverse_cumulative(0.5) == Approx(0.8));

    // Flat pieces: leftmost preimage
    auto gap = DensityProfile::tabulated(PiecewiseConstantField({0.0, 0.3, 0.6, 1.0}, {0.5, 0.0, 0.5}));
    CHECK(gap.inverse_cumulative(0.15) == Approx(0.3));

    auto bump = DensityProfile::bump(0.5, 0.4, 0.8, 0.2);
    double const total = oracle::simpson([&](double x) { return bump(x); }, 0.0, 1.0);
    CHECK(bump.total() == Approx(total).epsilon(1e-12));
    CHECK(bump.total() == Approx(0.2 + 0.6 * 0.2));
    for (double s : {0.05, 0.2, 0.31})
        CHECK(bump.cumulative(bump.inverse_cumulative(s)) == Approx(s).epsilon(1e-12));
}

TEST_CASE("inverse vacuum integrals")
{
    auto c = DensityProfile::constant(0.5);
    CHECK(c.inverse_vacuum_integral(0.1, 0.3) == Approx(0.4));
    auto rigid = DensityProfile::constant(1.0);
    CHECK(std::isinf(rigid.inverse_vacuum_integral(0.1, 0.3)));
    CHECK(rigid.rigid_on(0.1, 0.3, 1e-10));

    auto bump = DensityProfile::bump(0.5, 0.4, 0.8, 0.2);
    for (auto [a, b] : {std::pair{0.3, 0.5}, {0.35, 0.42}, {0.5, 0.7}, {0.0, 0.3}})
    {
        double const expected
            = oracle::simpson([&](double x) { return 1.0 / (1.0 - bump(x)); }, a, b);
        CHECK(bump.inverse_vacuum_integral(a, b) == Approx(expected).epsilon(1e-11));
    }
    // Full peak away from the center is still integrable.
    auto full = DensityProfile::bump(0.5, 0.4, 1.0, 0.0);
    double const expected
        = oracle::simpson([&](double x) { return 1.0 / (1.0 - full(x)); }, 0.31, 0.45);
    CHECK(full.inverse_vacuum_integral(0.31, 0.45) == Approx(expected).epsilon(1e-10));
}

TEST_CASE("density pairing and breakpoints")
{
    auto step = DensityProfile::step(0.5, {{0.4, 0.6, 1.0}});
    CHECK(step.breakpoints() == std::vector<double>{0.4, 0.6});
    // int rho x = 0.5 * 1/2 + 0.5 * int_{0.4}^{0.6} x
    CHECK(step.pair(TestFunction::monomial(1)) == Approx(0.25 + 0.5 * 0.1));
    CHECK(step.is_piecewise_constant());
    CHECK_FALSE(DensityProfile::bump(0.5, 0.2, 0.5).is_piecewise_constant());
}

TEST_CASE("force antiderivatives")
{
    std::vector<ForceProfile> forces{
        ForceProfile::constant(2.0),
        ForceProfile::polynomial({1.0, -3.0, 0.5, 2.0}),
        ForceProfile::sine(1.5, 3),
        ForceProfile::step(1.0, {{0.2, 0.5, -2.0}}),
        ForceProfile::tabulated(PiecewiseConstantField({0.0, 0.6, 1.0}, {3.0, -1.0})),
    };
    for (auto const& f : forces)
    {
        CAPTURE(f.kind());
        CHECK(f.antiderivative(0.0) == 0.0);
        CHECK(f.second_antiderivative(0.0) == 0.0);
        for (double x : {0.15, 0.55, 1.0})
        {
            double const F
                = oracle::simpson_split([&](double t) { return f(t); }, 0.0, x, {0.2, 0.5, 0.6});
            CHECK(f.antiderivative(x) == Approx(F).epsilon(1e-11));
            double const F2
                = oracle::simpson_split([&](double t) { return f.antiderivative(t); }, 0.0, x,
                                        {0.2, 0.5, 0.6});
            CHECK(f.second_antiderivative(x) == Approx(F2).epsilon(1e-9));
        }
    }
}

TEST_CASE("force averages")
{
    CHECK(ForceProfile::constant(3.0).average(0.2, 0.4) == Approx(3.0));
    CHECK(ForceProfile::polynomial({0.0, 1.0}).average(0.4, 0.6) == Approx(0.5));
    // sin(pi x) averaged over [0.4, 0.6]: sin(0.1 pi) / (0.1 pi)
    double const v = ForceProfile::sine(1.0, 1).average(0.4, 0.6);
    CHECK(v == Approx(0.98363164).epsilon(1e-8));
    CHECK(v == Approx(std::sin(0.1 * pi) / (0.1 * pi)).epsilon(1e-14));
    auto step = ForceProfile::step(1.0, {{0.5, 1.0, 3.0}});
    CHECK(step.average(0.4, 0.6) == Approx(2.0));
}

TEST_CASE("force L1 norms")
{
    CHECK(ForceProfile::constant(-2.0).l1_norm() == Approx(2.0));
    CHECK(ForceProfile::sine(1.0, 3).l1_norm() == Approx(2.0 / pi));
    auto p = ForceProfile::polynomial({-0.5, 1.0});  // |x - 1/2|
    CHECK(p.l1_norm() == Approx(0.25).epsilon(1e-12));
    auto q = ForceProfile::polynomial({0.1, -2.0, 3.0});
    double const expected = oracle::simpson([&](double x) { return std::abs(q(x)); }, 0.0, 1.0, 200000);
    CHECK(q.l1_norm() == Approx(expected).epsilon(1e-8));
    auto t = ForceProfile::tabulated(PiecewiseConstantField({0.0, 0.25, 1.0}, {-4.0, 1.0}));
    CHECK(t.l1_norm() == Approx(1.75));
}

TEST_CASE("integrate_smooth is exact for low-degree polynomials")
{
    CHECK(integrate_smooth([](double x) { return std::pow(x, 9); }, 0.0, 2.0)
          == Approx(std::pow(2.0, 10) / 10).epsilon(1e-14));
}
}
