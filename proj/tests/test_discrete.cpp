#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lubchain/discrete.hpp"
#include "lubchain/error.hpp"
#include "lubchain/random_cases.hpp"
#include "lubchain/reference.hpp"

using namespace lubchain;
using namespace lubchain::discrete;
using doctest::Approx;

namespace {

std::vector<double> regularized(ParticleConfiguration const& c, double eta)
{
    auto g = c.contact_gaps();
    for (double& v : g)
    {
        if (v == 0.0)
            v = eta;
    }
    return g;
}

double max_diff(std::span<double const> a, std::span<double const> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_SUITE("discrete")
{
TEST_CASE("stiffness matrix")
{
    std::vector<double> d2{0.3, 0.3};
    auto m = build_matrix(d2);
    REQUIRE(m.size() == 1);
    CHECK(m.diag[0] == Approx(6.6667).epsilon(1e-4));

    std::vector<double> d3{0.2, 0.2, 0.2};
    auto m3 = build_matrix(d3);
    CHECK(m3.diag == std::vector<double>{10.0, 10.0});
    CHECK(m3.upper[0] == Approx(-5.0));
    CHECK(m3.lower[0] == Approx(-5.0));

    Xoshiro256 rng(3);
    auto cfg = random_cases::strict_configuration(rng, 40);
    CHECK(build_matrix(cfg).is_symmetric());

    CHECK_THROWS_AS(build_matrix(ParticleConfiguration(0.1, {0.2, 0.55})), SolverError);
}

TEST_CASE("single interior particle")
{
    ParticleConfiguration cfg(0.1, {0.5});
    std::vector<double> f{1.0};
    auto strict = solve_strict(cfg, f);
    CHECK(strict.velocities[1] == Approx(0.15));
    CHECK(strict.solver == SolverKind::thomas);
    auto closed = solve_explicit(cfg, f);
    CHECK(closed.velocities[1] == Approx(0.15));
    CHECK(closed.solver == SolverKind::explicit_formula);

    auto u = interpolant(cfg, strict);
    CHECK(u(0.5) == Approx(0.15));
    CHECK(u(0.25) == Approx(0.075));
}

TEST_CASE("zero load gives zero velocity")
{
    Xoshiro256 rng(11);
    auto cfg = random_cases::strict_configuration(rng, 25);
    std::vector<double> f(24, 0.0);
    for (double v : solve_strict(cfg, f).velocities)
        CHECK(v == 0.0);
    for (double v : solve_explicit(cfg, f).velocities)
        CHECK(v == 0.0);
}

TEST_CASE("boundary-driven chain is linear in the vacuum coordinate")
{
    Xoshiro256 rng(5);
    auto cfg = random_cases::strict_configuration(rng, 12);
    std::vector<double> f(11, 0.0);
    auto sol = solve_strict(cfg, f, 1.0, 0.0);
    auto d = cfg.gaps();
    double total = 0.0;
    for (double g : d)
        total += g;
    double partial = 0.0;
    for (std::size_t i = 1; i < 12; ++i)
    {
        partial += d[i - 1];
        CHECK(sol.velocities[i] == Approx(1.0 - partial / total).epsilon(1e-13));
        CHECK(sol.velocities[i] <= sol.velocities[i - 1]);
    }
    auto w = w_field(cfg, sol);
    for (double v : w.values())
        CHECK(v == Approx(-1.0 / total).epsilon(1e-12));
    auto stress = end_stress(cfg, sol);
    REQUIRE(stress);
    CHECK(*stress == Approx(1.0 / total).epsilon(1e-13));
    CHECK(*stress == Approx((sol.velocities[11] - sol.velocities[12]) / d[11]).epsilon(1e-12));
}

TEST_CASE("end stress")
{
    ParticleConfiguration cfg(0.1, {0.5});
    std::vector<double> f{0.0};
    auto sol = solve_strict(cfg, f, 1.0, 0.0);
    CHECK(*end_stress(cfg, sol) == Approx(1.6667).epsilon(1e-4));

    auto same = solve_strict(cfg, f, 0.7, 0.7);
    CHECK(*end_stress(cfg, same) == Approx(0.0));

    // Halving the gaps doubles the stress.
    std::vector<double> half{0.15, 0.15};
    auto cfg_half = ParticleConfiguration::from_gaps(0.175, half);
    auto sol_half = solve_strict(cfg_half, f, 1.0, 0.0);
    CHECK(*end_stress(cfg_half, sol_half) == Approx(2.0 * 1.6667).epsilon(1e-4));

    auto packed = ParticleConfiguration(0.125, {0.25, 0.5, 0.75});
    std::vector<double> f3(3, 0.0);
    auto rigid = solve(packed, f3);
    CHECK(rigid.rigid_global);
    CHECK_FALSE(end_stress(packed, rigid).has_value());
}

TEST_CASE("dissipation identity")
{
    Xoshiro256 rng(8);
    auto cfg = random_cases::strict_configuration(rng, 30);
    auto f = random_cases::loads(rng, 29);
    auto sol = solve_strict(cfg, f);
    auto d = cfg.gaps();
    double work = 0.0, dissipation = 0.0;
    for (std::size_t i = 1; i < 30; ++i)
        work += f[i - 1] * sol.velocities[i];
    for (std::size_t i = 1; i <= 30; ++i)
        dissipation += std::pow(sol.velocities[i] - sol.velocities[i - 1], 2) / d[i - 1];
    CHECK(work == Approx(dissipation).epsilon(1e-12));
    CHECK(dissipation >= 0.0);
}

TEST_CASE("three solution routes agree")
{
    for (std::size_t n : {3u, 10u, 100u})
    {
        for (int t = 0; t < 20; ++t)
        {
            Xoshiro256 rng(stream_seed(99, n * 100 + t));
            auto cfg = random_cases::strict_configuration(rng, n);
            auto f = random_cases::loads(rng, n - 1);
            auto thomas = solve_strict(cfg, f);
            auto closed = solve_explicit(cfg, f);
            auto dense = reference::dense_solve(reference::to_dense(build_matrix(cfg)), f);
            auto serial = reference::explicit_solution_serial(cfg.gaps(), f);
            double scale = 0.0;
            for (double v : dense)
                scale = std::max(scale, std::abs(v));
            for (std::size_t i = 0; i + 1 < n; ++i)
            {
                CHECK(std::abs(thomas.velocities[i + 1] - dense[i]) <= 1e-12 * scale);
                CHECK(std::abs(closed.velocities[i + 1] - dense[i]) <= 1e-12 * scale);
                CHECK(std::abs(serial[i] - dense[i]) <= 1e-12 * scale);
            }
            CHECK(thomas.residual <= 1e-10);
        }
    }
}

TEST_CASE("viscosity rescales velocities")
{
    Xoshiro256 rng(21);
    auto cfg = random_cases::strict_configuration(rng, 9);
    auto f = random_cases::loads(rng, 8);
    SolveOptions opts;
    opts.viscosity = 4.0;
    auto a = solve_strict(cfg, f);
    auto b = solve_strict(cfg, f, 0.0, 0.0, opts);
    auto c = solve_explicit(cfg, f, opts);
    for (std::size_t i = 0; i < a.velocities.size(); ++i)
    {
        CHECK(b.velocities[i] == Approx(a.velocities[i] / 4.0).epsilon(1e-13));
        CHECK(c.velocities[i] == Approx(a.velocities[i] / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("cluster pinned to the left wall")
{
    ParticleConfiguration cfg(0.1, {0.2, 0.55});
    std::vector<double> f{1.0, 1.0};
    auto sol = solve(cfg, f);
    CHECK(sol.solver == SolverKind::clustered);
    CHECK(sol.velocities[1] == 0.0);
    CHECK(sol.velocities[2] == Approx(3.0 / 32.0).epsilon(1e-14));

    auto closed = solve_explicit(cfg, f);
    CHECK(closed.velocities[2] == Approx(3.0 / 32.0).epsilon(1e-13));

    // beta_1 from the balance of particle 1: flux_2 - beta_1 = -f_1
    REQUIRE(sol.cohesion.size() == 1);
    double const flux2 = (sol.velocities[2] - sol.velocities[1]) / 0.15;
    CHECK(sol.cohesion[0].forces[0] == Approx(flux2 + 1.0));
}

TEST_CASE("no clusters reduces to the strict solve")
{
    Xoshiro256 rng(4);
    auto cfg = random_cases::strict_configuration(rng, 17);
    auto f = random_cases::loads(rng, 16);
    auto a = solve_strict(cfg, f, 0.3, -0.2);
    auto b = solve_clustered(cfg, detect_clusters(cfg), f, 0.3, -0.2);
    CHECK(max_diff(a.velocities, b.velocities) <= 1e-13);
}

TEST_CASE("interior cluster with no load inside carries the inflow flux")
{
    ParticleConfiguration cfg(0.1, {0.3, 0.5, 0.75});
    std::vector<double> f{0.0, 0.0, 1.0};
    auto sol = solve(cfg, f);
    REQUIRE(sol.cohesion.size() == 1);
    CHECK(sol.cohesion[0].cluster == NodeRange{1, 2});
    double const inflow = (sol.velocities[1] - sol.velocities[0]) / 0.1;
    CHECK(sol.cohesion[0].forces[0] == Approx(inflow).epsilon(1e-13));
    CHECK(sol.velocities[1] == sol.velocities[2]);
}

TEST_CASE("cohesion force is the multiplier of the rigidity constraint")
{
    // Particles 1 and 2 in contact; elastic links 1 and 3.
    ParticleConfiguration cfg(0.1, {0.3, 0.5});
    std::vector<double> f{1.0, -0.5};
    auto sol = solve(cfg, f);
    REQUIRE(sol.cohesion.size() == 1);

    // Stationarity of the constrained quadratic program:
    // A_elastic v + C^T lambda = f, C v = 0 with C = (-1, +1).
    double const c1 = 1.0 / 0.1, c3 = 1.0 / 0.3;
    reference::DenseMatrix kkt(3, 3);
    kkt(0, 0) = c1;
    kkt(1, 1) = c3;
    kkt(0, 2) = -1.0;
    kkt(1, 2) = 1.0;
    kkt(2, 0) = -1.0;
    kkt(2, 1) = 1.0;
    auto x = reference::dense_solve(kkt, {1.0, -0.5, 0.0});
    CHECK(sol.velocities[1] == Approx(x[0]).epsilon(1e-13));
    CHECK(sol.velocities[2] == Approx(x[1]).epsilon(1e-13));
    CHECK(sol.cohesion[0].forces[0] == Approx(x[2]).epsilon(1e-13));
}

TEST_CASE("regularized gaps converge to the clustered solution")
{
    for (int t = 0; t < 10; ++t)
    {
        Xoshiro256 rng(stream_seed(17, t));
        auto cfg = random_cases::clustered_configuration(rng, 30, 1 + t % 5);
        auto f = random_cases::loads(rng, 29);
        auto clustered = solve(cfg, f);
        double previous = INFINITY;
        for (double eta : {1e-2, 1e-4, 1e-6, 1e-8})
        {
            auto strict = solve_strict(regularized(cfg, eta), f);
            double const err = max_diff(strict.velocities, clustered.velocities);
            CHECK(err < previous);
            previous = err;
        }
        CHECK(previous <= 1e-6);
    }
}

TEST_CASE("cohesion forces are the limit of regularized link fluxes")
{
    for (int t = 0; t < 10; ++t)
    {
        Xoshiro256 rng(stream_seed(23, t));
        auto cfg = random_cases::clustered_configuration(rng, 24, 1 + t % 4);
        auto f = random_cases::loads(rng, 23);
        auto clustered = solve(cfg, f);
        double const eta = 1e-9;
        auto g = regularized(cfg, eta);
        auto strict = solve_strict(g, f);
        for (auto const& c : clustered.cohesion)
        {
            for (std::size_t k = 0; k < c.forces.size(); ++k)
            {
                std::size_t const link = c.cluster.first + k + 1;
                double const flux = (strict.velocities[link] - strict.velocities[link - 1]) / eta;
                CHECK(c.forces[k] == Approx(flux).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("fully packed array")
{
    auto packed = ParticleConfiguration(0.125, {0.25, 0.5, 0.75});
    std::vector<double> f{1.0, -2.0, 0.5};
    auto sol = solve(packed, f, 0.3, 0.3);
    CHECK(sol.rigid_global);
    for (double v : sol.velocities)
        CHECK(v == 0.3);
    CHECK_THROWS_AS(solve(packed, f, 0.0, 1.0), SolverError);

    // Cohesion equals the equal-gap regularization limit.
    auto closed = solve_explicit(packed, f);
    CHECK(closed.rigid_global);
    double const eta = 1e-9;
    std::vector<double> g(4, eta);
    auto strict = solve_strict(g, f);
    REQUIRE(sol.cohesion.size() == 1);
    for (std::size_t k = 0; k < 4; ++k)
    {
        double const flux = (strict.velocities[k + 1] - strict.velocities[k]) / eta;
        CHECK(sol.cohesion[0].forces[k] == Approx(flux).epsilon(1e-6));
    }
}

TEST_CASE("explicit formula handles contacts")
{
    for (int t = 0; t < 10; ++t)
    {
        Xoshiro256 rng(stream_seed(31, t));
        auto cfg = random_cases::clustered_configuration(rng, 40, 1 + t % 5);
        auto f = random_cases::loads(rng, 39);
        auto a = solve(cfg, f);
        auto b = solve_explicit(cfg, f);
        CHECK(max_diff(a.velocities, b.velocities) <= 1e-12);
        CHECK(b.residual <= 1e-10);
    }
}

TEST_CASE("inconsistent cluster data is rejected")
{
    ParticleConfiguration cfg(0.1, {0.2, 0.55});
    std::vector<double> f{1.0, 1.0};
    ClusterDecomposition none;
    CHECK_THROWS_AS(solve_clustered(cfg, none, f), InputError);

    auto clusters = detect_clusters(cfg);
    auto sol = solve(cfg, f);
    auto wrong = sol.velocities;
    wrong[2] += 0.1;
    // Velocities that violate the balance leave a residual.
    CHECK(balance_residual(cfg, clusters, wrong, f) > 1e-3);
    CHECK(balance_residual(cfg, clusters, sol.velocities, f) <= 1e-12);
    CHECK_THROWS_AS(solve(cfg, std::vector<double>{1.0}), InputError);
}

TEST_CASE("interior cluster with inconsistent velocities throws")
{
    ParticleConfiguration cfg(0.1, {0.3, 0.5, 0.75});
    std::vector<double> f{0.2, 0.4, 1.0};
    auto clusters = detect_clusters(cfg);
    auto sol = solve(cfg, f);
    auto bad = sol.velocities;
    bad[3] += 0.05;
    CHECK_THROWS_AS(cohesion_forces(cfg, clusters, bad, f), SolverError);
}

TEST_CASE("w field mixes link slopes and cohesion forces")
{
    ParticleConfiguration cfg(0.1, {0.3, 0.5, 0.75});
    std::vector<double> f{0.2, 0.4, 1.0};
    auto sol = solve(cfg, f);
    auto w = w_field(cfg, sol);
    CHECK(w(0.1) == Approx((sol.velocities[1] - sol.velocities[0]) / 0.1));
    CHECK(w(0.4) == Approx(sol.cohesion[0].forces[0]));
    CHECK(w(0.9) == Approx((sol.velocities[4] - sol.velocities[3]) / 0.05));
}
}
