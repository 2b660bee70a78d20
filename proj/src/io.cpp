#include "lubchain/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lubchain/error.hpp"
#include "lubchain/format.hpp"

namespace lubchain::io {
namespace {

std::string trim(std::string s)
{
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::optional<double> parse_double(std::string const& text)
{
    auto s = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

std::vector<std::string> read_lines(fs::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
    {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        lines.push_back(line);
    }
    return lines;
}

/// Rethrow JSON access errors as input errors with context.
template<class F>
auto guarded(char const* what, F&& f)
{
    try
    {
        return f();
    }
    catch (nlohmann::json::exception const& e)
    {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

std::vector<DensityProfile::StepPiece> parse_pieces(Json const& j)
{
    std::vector<DensityProfile::StepPiece> pieces;
    for (auto const& p : j.at("pieces"))
    {
        pieces.push_back(
            {p.at("from").get<double>(), p.at("to").get<double>(), p.at("value").get<double>()});
    }
    return pieces;
}

PiecewiseConstantField parse_table(Json const& j, fs::path const& base_dir)
{
    if (j.contains("csv"))
    {
        fs::path p = j.at("csv").get<std::string>();
        if (p.is_relative())
            p = base_dir / p;
        return read_tabulated_csv(p);
    }
    auto bp = j.at("breakpoints").get<std::vector<double>>();
    auto vals = j.at("values").get<std::vector<double>>();
    if (bp.size() == vals.size())
        bp.push_back(1.0);
    if (bp.size() != vals.size() + 1)
        throw InputError("tabulated: need one value per piece");
    return PiecewiseConstantField(std::move(bp), std::move(vals));
}

void require_object(Json const& j, char const* what)
{
    if (!j.is_object())
        throw InputError(std::string(what) + " must be a JSON object");
}

std::string cell(double v)
{
    return format_number(v);
}

}  // namespace

//---------------------------------------------------------------------------//
std::string schema_line(std::string const& artifact)
{
    return "#lubchain " + artifact + " schema=" + std::to_string(kSchemaVersion)
           + " version=" LUBCHAIN_VERSION "\n";
}

DensityProfile parse_density(Json const& j, fs::path const& base_dir)
{
    require_object(j, "density");
    return guarded("density", [&] {
        auto const type = j.at("type").get<std::string>();
        if (type == "constant")
            return DensityProfile::constant(j.at("value").get<double>());
        if (type == "step")
            return DensityProfile::step(j.at("background").get<double>(), parse_pieces(j));
        if (type == "bump")
        {
            return DensityProfile::bump(j.at("center").get<double>(), j.at("width").get<double>(),
                                        j.at("peak").get<double>(), j.value("base", 0.0));
        }
        if (type == "tabulated")
            return DensityProfile::tabulated(parse_table(j, base_dir));
        throw InputError("density: unknown type '" + type + "'");
    });
}

ForceProfile parse_force(Json const& j, fs::path const& base_dir)
{
    require_object(j, "force");
    return guarded("force", [&] {
        auto const type = j.at("type").get<std::string>();
        if (type == "constant")
            return ForceProfile::constant(j.at("value").get<double>());
        if (type == "polynomial")
            return ForceProfile::polynomial(j.at("coefficients").get<std::vector<double>>());
        if (type == "sine")
            return ForceProfile::sine(j.value("amplitude", 1.0), j.at("k").get<int>());
        if (type == "step")
            return ForceProfile::step(j.at("background").get<double>(), parse_pieces(j));
        if (type == "tabulated")
            return ForceProfile::tabulated(parse_table(j, base_dir));
        throw InputError("force: unknown type '" + type + "'");
    });
}

ProfileSpec parse_profile(Json const& j, fs::path const& base_dir)
{
    require_object(j, "profile");
    return guarded("profile", [&] {
        ProfileSpec profile{parse_density(j.at("density"), base_dir),
                         parse_force(j.at("force"), base_dir), std::nullopt};
        if (j.contains("epsilon"))
            profile.epsilon = j.at("epsilon").get<double>();
        profile.u_left = j.value("u0", 0.0);
        profile.u_right = j.value("uN", 0.0);
        profile.grid_size = j.value("grid_size", 64);
        return profile;
    });
}

ProfileSpec read_profile(fs::path const& path)
{
    return parse_profile(read_json(path), path.parent_path());
}

experiments::SweepPlan parse_plan(Json const& j, fs::path const& base_dir)
{
    require_object(j, "plan");
    return guarded("plan", [&] {
        experiments::SweepPlan plan{parse_density(j.at("density"), base_dir),
                                    parse_force(j.at("force"), base_dir), {}};
        if (j.contains("epsilons"))
        {
            plan.epsilons = j.at("epsilons").get<std::vector<double>>();
        }
        else
        {
            auto const& r = j.at("epsilon_range");
            plan.epsilons = experiments::epsilon_range(
                r.at("max").get<double>(), r.at("min").get<double>(), r.value("ratio", 2.0));
        }
        plan.grid_size = j.value("grid_size", 4096);
        if (j.contains("test_family"))
        {
            plan.test_family.clear();
            for (auto const& name : j.at("test_family"))
                plan.test_family.push_back(TestFunction::parse(name.get<std::string>()));
        }
        plan.seed = j.value("seed", std::uint64_t{0});
        experiments::validate(plan);
        return plan;
    });
}

Json read_json(fs::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    try
    {
        return Json::parse(in);
    }
    catch (nlohmann::json::exception const& e)
    {
        throw InputError(path.string() + ": " + e.what());
    }
}

PiecewiseConstantField read_tabulated_csv(fs::path const& path)
{
    std::vector<double> bp;
    std::vector<double> vals;
    auto lines = read_lines(path);
    for (std::size_t k = 0; k < lines.size(); ++k)
    {
        auto const comma = lines[k].find(',');
        auto x = comma == std::string::npos ? std::nullopt : parse_double(lines[k].substr(0, comma));
        auto v = comma == std::string::npos ? std::nullopt : parse_double(lines[k].substr(comma + 1));
        if (!x || !v)
        {
            if (k == 0)
                continue;  // header
            throw InputError(path.string() + ": malformed row '" + lines[k] + "'");
        }
        bp.push_back(*x);
        vals.push_back(*v);
    }
    if (vals.empty())
        throw InputError(path.string() + ": no rows");
    bp.push_back(1.0);
    return PiecewiseConstantField(std::move(bp), std::move(vals));
}

ParticleConfiguration read_particles(fs::path const& path)
{
    auto lines = read_lines(path);
    if (lines.empty() || lines.front().rfind("epsilon=", 0) != 0)
        throw InputError(path.string() + ": first line must be epsilon=<radius>");
    auto eps = parse_double(lines.front().substr(8));
    if (!eps)
        throw InputError(path.string() + ": bad epsilon");
    std::vector<double> centers;
    for (std::size_t k = 1; k < lines.size(); ++k)
    {
        auto q = parse_double(lines[k]);
        if (!q)
            throw InputError(path.string() + ": malformed center '" + lines[k] + "'");
        centers.push_back(*q);
    }
    if (!centers.empty() && centers.front() == 0.0)
        centers.erase(centers.begin());
    if (!centers.empty() && centers.back() == 1.0)
        centers.pop_back();
    return ParticleConfiguration(*eps, std::move(centers));
}

std::string particles_csv(ParticleConfiguration const& config)
{
    std::string out = schema_line("particles");
    out += "epsilon=" + cell(config.radius()) + "\n";
    for (std::size_t i = 1; i < config.num_intervals(); ++i)
        out += cell(config.center(i)) + "\n";
    return out;
}

std::string discrete_solution_csv(ParticleConfiguration const& config,
                                  discrete::DiscreteSolution const& sol)
{
    std::string out = schema_line("discrete-solution") + "index,center,velocity\n";
    for (std::size_t i = 0; i < sol.velocities.size(); ++i)
        out += std::to_string(i) + "," + cell(config.center(i)) + "," + cell(sol.velocities[i]) + "\n";
    return out;
}

std::string w_field_csv(PiecewiseConstantField const& w)
{
    std::string out = schema_line("w-field") + "left,right,value\n";
    auto bp = w.breakpoints();
    auto v = w.values();
    for (std::size_t j = 0; j < v.size(); ++j)
        out += cell(bp[j]) + "," + cell(bp[j + 1]) + "," + cell(v[j]) + "\n";
    return out;
}

Json clusters_json(ParticleConfiguration const& config, discrete::DiscreteSolution const& sol,
                   double hminus1_residual)
{
    Json j;
    j["schema"] = "lubchain-clusters/" + std::to_string(kSchemaVersion);
    j["version"] = LUBCHAIN_VERSION;
    j["epsilon"] = config.radius();
    j["num_intervals"] = config.num_intervals();
    j["solver"] = discrete::to_string(sol.solver);
    j["rigid_global"] = sol.rigid_global;
    j["solve_residual"] = sol.residual;
    j["hminus1_residual"] = hminus1_residual;
    j["clusters"] = Json::array();
    for (auto const& c : sol.cohesion)
    {
        j["clusters"].push_back(
            {{"first", c.cluster.first}, {"last", c.cluster.last}, {"cohesion", c.forces}});
    }
    return j;
}

std::string macro_solution_csv(continuum::MacroSolution const& sol)
{
    std::string out = schema_line("macro-solution") + "node,u_h\n";
    auto x = sol.field.nodes();
    auto u = sol.field.values();
    for (std::size_t i = 0; i < x.size(); ++i)
        out += cell(x[i]) + "," + cell(u[i]) + "\n";
    return out;
}

std::string macro_flux_csv(continuum::MacroSolution const& sol)
{
    std::string out = schema_line("macro-flux") + "element_left,element_right,sigma\n";
    auto bp = sol.flux.breakpoints();
    auto s = sol.flux.values();
    for (std::size_t e = 0; e < s.size(); ++e)
        out += cell(bp[e]) + "," + cell(bp[e + 1]) + "," + cell(s[e]) + "\n";
    return out;
}

Json macro_json(continuum::MacroProblem const& problem, continuum::MacroSolution const& sol)
{
    Json j;
    j["schema"] = "lubchain-macro/" + std::to_string(kSchemaVersion);
    j["version"] = LUBCHAIN_VERSION;
    j["grid_size"] = problem.grid_size;
    j["num_elements"] = sol.rigid_elements.size();
    j["energy"] = sol.energy;
    j["rigid_global"] = sol.rigid_global;
    j["galerkin_residual"] = continuum::galerkin_residual(problem, sol);
    j["flux_balance_defect"] = continuum::flux_balance_defect(problem, sol);
    j["rigid_groups"] = Json::array();
    auto x = sol.field.nodes();
    for (auto const& g : sol.rigid_groups)
        j["rigid_groups"].push_back({{"left", x[g.first]}, {"right", x[g.last]}});
    return j;
}

std::string report_csv(experiments::SweepReport const& report)
{
    auto const& names = report.summary.test_functions;
    std::ostringstream out;
    out << schema_line("sweep-report");
    out << "epsilon,epsilon_eff,num_intervals,num_clusters,feasibility,solver,skipped,l2_error";
    for (char const* prefix : {"dpair", "chi", "chi_coarse", "load"})
    {
        for (auto const& n : names)
            out << "," << prefix << "[" << n << "]";
    }
    out << ",w_sup,w_variation,f_l1,sup_bound_ok,variation_bound_ok,hminus1_residual,"
           "solve_residual,skip_reason\n";
    for (auto const& r : report.rows)
    {
        out << cell(r.epsilon) << "," << cell(r.epsilon_eff) << "," << r.num_intervals << ","
            << r.num_clusters << "," << r.feasibility << "," << r.solver << ","
            << (r.skipped ? 1 : 0) << "," << cell(r.l2_error);
        for (auto const* column :
             {&r.derivative_pairing, &r.chi_pairing, &r.chi_coarse_pairing, &r.load_pairing})
        {
            for (std::size_t k = 0; k < names.size(); ++k)
                out << "," << (k < column->size() ? cell((*column)[k]) : std::string("nan"));
        }
        std::string reason = r.skip_reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        out << "," << cell(r.w_sup) << "," << cell(r.w_variation) << "," << cell(r.f_l1) << ","
            << int(r.sup_bound_ok) << "," << int(r.variation_bound_ok) << ","
            << cell(r.hminus1_residual) << "," << cell(r.solve_residual) << "," << reason << "\n";
    }
    return out.str();
}

Json summary_json(experiments::SweepReport const& report)
{
    auto const& s = report.summary;
    auto opt = [](std::optional<double> v) { return v ? Json(*v) : Json(nullptr); };
    Json j;
    j["schema"] = "lubchain-summary/" + std::to_string(kSchemaVersion);
    j["reference"] = report.reference;
    j["rows"] = report.rows.size();
    j["test_functions"] = s.test_functions;
    Json orders;
    orders["l2"] = opt(s.l2_order);
    Json dp = Json::object();
    Json cp = Json::object();
    Json cc = Json::object();
    Json dec = Json::object();
    for (std::size_t k = 0; k < s.test_functions.size(); ++k)
    {
        auto const& n = s.test_functions[k];
        dp[n] = opt(s.derivative_pairing_order[k]);
        cp[n] = opt(s.chi_pairing_order[k]);
        cc[n] = s.chi_constant[k];
        dec[n] = bool(s.derivative_pairing_decreasing[k]);
    }
    orders["derivative_pairing"] = dp;
    orders["chi_pairing"] = cp;
    j["fitted_orders"] = orders;
    j["chi_constant"] = cc;
    j["flags"] = {{"l2_decreasing", s.l2_decreasing},
                  {"derivative_pairing_decreasing", dec},
                  {"feasible", s.feasible},
                  {"bounds_hold", s.bounds_hold},
                  {"hminus1_holds", s.hminus1_holds},
                  {"chi_constant_finite", s.chi_constant_finite}};
    j["passed"] = s.passed;
    return j;
}

void write_file(fs::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

void write_json(fs::path const& path, Json const& j)
{
    write_file(path, j.dump(2) + "\n");
}

}  // namespace lubchain::io
