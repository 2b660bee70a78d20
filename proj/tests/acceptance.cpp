// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lubchain/checks.hpp"
#include "lubchain/experiments.hpp"

using namespace lubchain;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = checks::kDefaultSeed;

int g_failed = 0;

void report(int id, char const* title, bool ok, std::string const& detail)
{
    std::printf("[%d] %-44s %s  %s\n", id, title, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    g_failed += !ok;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool run_cli(std::string const& args)
{
    std::string const cmd = std::string("\"") + LUBCHAIN_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

void oracle_equivalence()
{
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0, residual = 0.0;
    std::size_t configs = 0;
    for (std::size_t n : {3, 10, 100, 10000, 100000})
    {
        auto s = checks::oracle_equivalence(kSeed, n, 200, n <= 100);
        worst = std::max({worst, s.explicit_vs_thomas, s.dense_vs_thomas});
        residual = std::max(residual, s.thomas_residual);
        configs += s.configs;
    }
    double const elapsed = seconds_since(t0);
    report(1, "oracle equivalence", worst <= 1e-12 && configs == 1000 && elapsed < 60.0,
           std::to_string(configs) + " configs, max rel " + sci(worst) + ", Thomas residual "
               + sci(residual) + ", " + sci(elapsed) + " s");
}

void cluster_regularization()
{
    auto s = checks::cluster_regularization(kSeed, 50);
    std::string errs;
    for (double e : s.max_error)
        errs += (errs.empty() ? "" : " ") + sci(e);
    report(2, "cluster/regularization consistency",
           s.configs == 50 && s.non_decreasing == 0 && s.max_error.back() <= 1e-6,
           std::to_string(s.configs) + " configs, worst err per eta [" + errs
               + "], non-monotone " + std::to_string(s.non_decreasing));
}

void pipeline()
{
    auto s = checks::pipeline_suite(kSeed, 1000);
    report(3, "weak balance identity",
           s.trials == 1000 && s.clustered > 0 && s.clustered < s.trials
               && s.max_hminus1_residual <= experiments::kHminus1Tolerance,
           std::to_string(s.trials) + " trials (" + std::to_string(s.clustered)
               + " clustered), max residual " + sci(s.max_hminus1_residual));
    report(4, "sup and variation bounds on w",
           s.trials == 1000 && s.sup_violations == 0 && s.variation_violations == 0,
           std::to_string(s.sup_violations + s.variation_violations) + " violations, worst ratios sup "
               + sci(s.worst_sup_ratio) + " var " + sci(s.worst_variation_ratio));
}

void macro()
{
    auto m = checks::macro_analytic();
    bool const ok = m.constant_nodal_error <= 1e-12 && m.plateau_error <= 1e-10
                    && m.plateau_slope == 0.0 && m.h_order >= 1.9;
    report(5, "macro analytic cases", ok,
           "constant err " + sci(m.constant_nodal_error) + ", plateau err " + sci(m.plateau_error)
               + ", plateau slope " + sci(m.plateau_slope) + ", h-order " + sci(m.h_order));
}

void convergence()
{
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (auto const& [name, rho] :
         {std::pair{"rho=0.5", DensityProfile::constant(0.5)},
          std::pair{"inclusion", checks::rigid_inclusion_density()}})
    {
        auto r = experiments::run_sweep(checks::convergence_plan(rho));
        auto const& first = r.rows.front();
        auto const& last = r.rows.back();
        bool pairings = true;
        for (bool d : r.summary.derivative_pairing_decreasing)
            pairings = pairings && d;
        ok = ok && last.l2_error < first.l2_error && pairings && r.summary.passed;
        detail += std::string(name) + " l2 " + sci(first.l2_error) + "->" + sci(last.l2_error) + "; ";
    }
    double const elapsed = seconds_since(t0);
    report(6, "convergence sweeps", ok && elapsed < 120.0, detail + sci(elapsed) + " s");
}

void generator()
{
    auto g = checks::generator_soundness();
    report(7, "generator soundness", g.configs > 0 && g.infeasible == 0 && g.finite,
           std::to_string(g.configs) + " configs, " + std::to_string(g.infeasible)
               + " infeasible, fitted C " + sci(g.max_chi_constant));
}

void determinism()
{
    auto root = fs::temp_directory_path() / ("lubchain_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    std::ofstream(root / "plan.json") << R"({
  "density": {"type": "step", "background": 0.5, "pieces": [{"from": 0.4, "to": 0.6, "value": 1.0}]},
  "force": {"type": "sine", "amplitude": 1.0, "k": 2},
  "epsilon_range": {"max": 0.0625, "min": 0.001953125, "ratio": 2},
  "grid_size": 1024,
  "seed": 7
})";

    bool ok = true;
    for (char const* run : {"a", "b"})
    {
        ok = ok && run_cli("check --trials 20 --out \"" + (root / run).string() + "\"");
        ok = ok && run_cli("sweep --plan \"" + (root / "plan.json").string() + "\" --out \""
                           + (root / run).string() + "\"");
    }
    bool const checks_same = ok && slurp(root / "a/checks.csv") == slurp(root / "b/checks.csv");
    bool const report_same = ok && slurp(root / "a/report.csv") == slurp(root / "b/report.csv");
    bool summary_same = false;
    if (ok)
    {
        // The run timestamp is the only field allowed to differ.
        auto strip = [](fs::path const& p) {
            auto j = nlohmann::json::parse(slurp(p));
            j["provenance"].erase("generated_at");
            return j.dump();
        };
        summary_same = strip(root / "a/summary.json") == strip(root / "b/summary.json");
    }
    fs::remove_all(root);
    report(8, "determinism of check and sweep outputs", checks_same && report_same && summary_same,
           std::string("checks.csv ") + (checks_same ? "identical" : "differs") + ", report.csv "
               + (report_same ? "identical" : "differs") + ", summary.json "
               + (summary_same ? "identical" : "differs"));
}

}  // namespace

int main()
{
    oracle_equivalence();
    cluster_regularization();
    pipeline();
    macro();
    convergence();
    generator();
    determinism();
    std::printf("%s\n", g_failed == 0 ? "all acceptance criteria passed"
                                      : "some acceptance criteria FAILED");
    return g_failed == 0 ? 0 : 1;
}
