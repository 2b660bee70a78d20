#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "continuum.hpp"
#include "discrete.hpp"
#include "experiments.hpp"
#include "geometry.hpp"
#include "profiles.hpp"

namespace lubchain::io {

using Json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kSchemaVersion = 1;

/// "#lubchain <artifact> schema=1 version=<v>": first line of every CSV.
std::string schema_line(std::string const& artifact);

/// Relative "csv" paths inside profiles resolve against base_dir.
DensityProfile parse_density(Json const& j, fs::path const& base_dir = {});
ForceProfile parse_force(Json const& j, fs::path const& base_dir = {});

/// Profile file shared by the discrete and macro subcommands.
struct ProfileSpec
{
    DensityProfile density;
    ForceProfile force;
    std::optional<double> epsilon;
    double u_left = 0.0;
    double u_right = 0.0;
    int grid_size = 64;
};

ProfileSpec parse_profile(Json const& j, fs::path const& base_dir = {});
ProfileSpec read_profile(fs::path const& path);

experiments::SweepPlan parse_plan(Json const& j, fs::path const& base_dir = {});
Json read_json(fs::path const& path);

/// Two columns "breakpoint,value"; value holds up to the next breakpoint,
/// the last one up to 1. Blank lines, '#' comments and a text header are
/// skipped.
PiecewiseConstantField read_tabulated_csv(fs::path const& path);

/// "epsilon=<radius>" then one interior center per line. Wall centers 0
/// and 1 may be listed; they are dropped.
ParticleConfiguration read_particles(fs::path const& path);
std::string particles_csv(ParticleConfiguration const& config);

std::string discrete_solution_csv(ParticleConfiguration const& config,
                                  discrete::DiscreteSolution const& sol);
std::string w_field_csv(PiecewiseConstantField const& w);
Json clusters_json(ParticleConfiguration const& config, discrete::DiscreteSolution const& sol,
                   double hminus1_residual);

std::string macro_solution_csv(continuum::MacroSolution const& sol);
std::string macro_flux_csv(continuum::MacroSolution const& sol);
Json macro_json(continuum::MacroProblem const& problem, continuum::MacroSolution const& sol);

std::string report_csv(experiments::SweepReport const& report);
/// Without the provenance block, which the caller adds.
Json summary_json(experiments::SweepReport const& report);

/// Writes the whole file in one go; throws std::runtime_error on failure.
void write_file(fs::path const& path, std::string const& content);
void write_json(fs::path const& path, Json const& j);

}  // namespace lubchain::io
