// lubchain: discrete / macro / sweep / check front end.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lubchain/checks.hpp"
#include "lubchain/continuum.hpp"
#include "lubchain/discrete.hpp"
#include "lubchain/error.hpp"
#include "lubchain/experiments.hpp"
#include "lubchain/format.hpp"
#include "lubchain/io.hpp"
#include "lubchain/rng.hpp"

namespace fs = std::filesystem;
using namespace lubchain;

namespace {

constexpr int kExitSolver = 1;
constexpr int kExitInput = 2;

int fail(int code, char const* kind, std::string const& message)
{
    io::Json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << "\n";
    return code;
}

/// --out, else $LUBCHAIN_OUT_DIR, else empty.
std::optional<fs::path> output_dir(std::string const& flag)
{
    if (!flag.empty())
        return fs::path(flag);
    if (char const* env = std::getenv("LUBCHAIN_OUT_DIR"); env && *env)
        return fs::path(env);
    return std::nullopt;
}

fs::path require_output_dir(std::string const& flag)
{
    auto dir = output_dir(flag);
    if (!dir)
        throw InputError("no output directory: pass --out or set LUBCHAIN_OUT_DIR");
    fs::create_directories(*dir);
    return *dir;
}

std::string utc_timestamp()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct DiscreteArgs
{
    std::string profile;
    std::string particles;
    std::string out;
    double epsilon = 0.0;
    double contact_tolerance = kContactTolerance;
};

int run_discrete(DiscreteArgs const& args)
{
    auto profile = io::read_profile(args.profile);
    auto dir = require_output_dir(args.out);
    discrete::SolveOptions opts;
    opts.contact_tolerance = args.contact_tolerance;

    std::optional<ParticleConfiguration> config;
    if (!args.particles.empty())
    {
        config.emplace(io::read_particles(args.particles));
    }
    else
    {
        double const eps = args.epsilon > 0.0 ? args.epsilon : profile.epsilon.value_or(0.0);
        if (!(eps > 0.0))
            throw InputError("discrete: profile needs \"epsilon\" (or pass --particles / --epsilon)");
        config.emplace(generate_configuration(profile.density, eps).config);
    }

    auto loads = particle_loads(*config, sample_forces(*config, profile.force));
    auto sol = discrete::solve(*config, loads, profile.u_left, profile.u_right, opts);
    auto w = discrete::w_field(*config, sol, opts);
    double const residual = experiments::h_minus1_residual(w, *config, loads);

    io::write_file(dir / "particles.csv", io::particles_csv(*config));
    io::write_file(dir / "solution.csv", io::discrete_solution_csv(*config, sol));
    io::write_file(dir / "w_field.csv", io::w_field_csv(w));
    io::write_json(dir / "clusters.json", io::clusters_json(*config, sol, residual));

    std::cout << "N=" << config->num_intervals() << " epsilon=" << format_number(config->radius())
              << " solver=" << discrete::to_string(sol.solver)
              << " clusters=" << sol.cohesion.size()
              << " residual=" << format_number(sol.residual) << "\n";
    return 0;
}

struct MacroArgs
{
    std::string profile;
    std::string out;
    int grid = 0;
};

int run_macro(MacroArgs const& args)
{
    auto profile = io::read_profile(args.profile);
    auto dir = require_output_dir(args.out);
    continuum::MacroProblem problem{profile.density, profile.force,
                                    args.grid > 0 ? args.grid : profile.grid_size};
    auto sol = continuum::solve_macro(problem);

    io::write_file(dir / "solution.csv", io::macro_solution_csv(sol));
    io::write_file(dir / "flux.csv", io::macro_flux_csv(sol));
    io::write_json(dir / "macro.json", io::macro_json(problem, sol));

    std::cout << "elements=" << sol.rigid_elements.size()
              << " rigid_groups=" << sol.rigid_groups.size()
              << " energy=" << format_number(sol.energy) << "\n";
    return 0;
}

struct SweepArgs
{
    std::string plan;
    std::string out;
    int jobs = 0;
};

int run_sweep(SweepArgs const& args)
{
    auto raw = io::read_json(args.plan);
    auto plan = io::parse_plan(raw, fs::path(args.plan).parent_path());
    auto dir = require_output_dir(args.out);
    auto report = experiments::run_sweep(plan, args.jobs);

    auto summary = io::summary_json(report);
    summary["provenance"] = {{"plan", raw},
                             {"version", LUBCHAIN_VERSION},
                             {"reference", report.reference},
                             {"prng", Xoshiro256::name},
                             {"generated_at", utc_timestamp()}};
    io::write_file(dir / "report.csv", io::report_csv(report));
    io::write_json(dir / "summary.json", summary);

    auto const& s = report.summary;
    std::cout << "rows=" << report.rows.size() << " reference=" << report.reference
              << " l2_decreasing=" << s.l2_decreasing << " bounds=" << s.bounds_hold
              << " hminus1=" << s.hminus1_holds << " passed=" << s.passed << "\n";
    bool const sound = s.feasible && s.bounds_hold && s.hminus1_holds;
    if (!sound)
        return fail(kExitSolver, "violation", "a per-row bound failed; see report.csv");
    return 0;
}

struct CheckArgs
{
    std::uint64_t seed = checks::kDefaultSeed;
    int trials = 200;
    std::string out;
};

int run_check(CheckArgs const& args)
{
    auto results = checks::run_checks({args.seed, args.trials});
    bool all = true;
    std::size_t width = 0;
    for (auto const& r : results)
        width = std::max(width, r.name.size());
    for (auto const& r : results)
    {
        std::printf("%-*s  %s  %s\n", int(width), r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.metric.c_str());
        all = all && r.passed;
    }
    if (auto dir = output_dir(args.out))
    {
        fs::create_directories(*dir);
        io::write_file(*dir / "checks.csv", checks::results_csv(results));
    }
    std::printf("%s\n", all ? "all checks passed" : "some checks FAILED");
    return all ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lubricated sphere chains: discrete solver, macroscopic limit, sweeps"};
    app.set_version_flag("--version", LUBCHAIN_VERSION);
    app.require_subcommand(1, 1);

    DiscreteArgs d;
    auto* discrete_cmd = app.add_subcommand("discrete", "solve one particle configuration");
    discrete_cmd->add_option("--profile", d.profile, "profile JSON")->required();
    discrete_cmd->add_option("--particles", d.particles, "particle CSV (epsilon=<r> header)");
    discrete_cmd->add_option("--out", d.out, "output directory");
    discrete_cmd->add_option("--epsilon", d.epsilon, "radius override");
    discrete_cmd->add_option("--contact-tol", d.contact_tolerance, "contact tolerance");

    MacroArgs m;
    auto* macro_cmd = app.add_subcommand("macro", "solve the macroscopic problem");
    macro_cmd->add_option("--profile", m.profile, "profile JSON")->required();
    macro_cmd->add_option("--grid", m.grid, "number of uniform cells");
    macro_cmd->add_option("--out", m.out, "output directory");

    SweepArgs s;
    auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep against the macroscopic solution");
    sweep_cmd->add_option("--plan", s.plan, "plan JSON")->required();
    sweep_cmd->add_option("--out", s.out, "output directory");
    sweep_cmd->add_option("--jobs", s.jobs, "worker threads (0: all)");

    CheckArgs c;
    auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
    check_cmd->add_option("--seed", c.seed, "suite seed");
    check_cmd->add_option("--trials", c.trials, "base trial count");
    check_cmd->add_option("--out", c.out, "write checks.csv here");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        return fail(kExitInput, "usage", e.what());
    }

    try
    {
        if (*discrete_cmd)
            return run_discrete(d);
        if (*macro_cmd)
            return run_macro(m);
        if (*sweep_cmd)
            return run_sweep(s);
        return run_check(c);
    }
    catch (InputError const& e)
    {
        return fail(kExitInput, "input", e.what());
    }
    catch (SolverError const& e)
    {
        return fail(kExitSolver, "solver", e.what());
    }
    catch (std::exception const& e)
    {
        return fail(kExitSolver, "runtime", e.what());
    }
}
