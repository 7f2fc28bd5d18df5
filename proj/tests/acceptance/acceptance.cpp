// Runs the recipes with the default configuration and master seed 1, then
// checks each acceptance criterion against the artifacts they write. Prints
// one PASS/FAIL line per criterion, followed by INFO lines for reported but
// unasserted quantities.

#include "ctfsyn/error.hpp"
#include "ctfsyn/exp/config.hpp"
#include "ctfsyn/exp/recipes.hpp"
#include "ctfsyn/plasticity/fit.hpp"
#include "ctfsyn/plasticity/model.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::json;
using namespace ctfsyn;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
    int id;
    bool pass;
    std::string detail;
};

struct Runner {
    fs::path root;
    exp::ExperimentConfig cfg = exp::default_config();

    // Runs a recipe and returns its wall-clock seconds.
    double run(const std::string& recipe)
    {
        const auto t0 = std::chrono::steady_clock::now();
        exp::run_recipe(recipe, cfg, kSeed, root / recipe);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    Json read(const std::string& recipe, const std::string& file) const
    {
        std::ifstream in(root / recipe / file);
        if (!in)
            throw Error("missing artifact " + (root / recipe / file).string());
        return Json::parse(in);
    }
};

bool within(double v, double target, double tol)
{
    return std::abs(v - target) <= tol;
}

Verdict check_traversal(Runner& r)
{
    const double secs = r.run("fig2a-trajectories");
    const auto j = r.read("fig2a-trajectories", "traversal.json");
    const double p = j["program_pulses_to_cross"], e = j["erase_pulses_to_cross"];
    const bool ok = within(p, 1000, 200) && within(e, 1000, 200) && secs < 10.0;
    return {1, ok,
            fmt::format("window traversal: program {} pulses, erase {} pulses (1000 +/- 200); recipe {:.2f} s (< 10 s)",
                        p, e, secs)};
}

Verdict check_thresholds(Runner& r)
{
    r.run("fig2b-thresholds");
    const auto j = r.read("fig2b-thresholds", "thresholds.json");
    const double p = j["program_threshold_v"], e = j["erase_threshold_v"];
    return {2, within(p, 9.8, 0.5) && within(e, -11.5, 0.5),
            fmt::format("write thresholds: program {:.3f} V (9.8 +/- 0.5), erase {:.3f} V (-11.5 +/- 0.5)", p, e)};
}

Verdict check_levels(Runner& r)
{
    r.run("fig2c-levels");
    const auto j = r.read("fig2c-levels", "levels.json");
    bool ok = true;
    std::string parts;
    for (const char* branch : {"program", "erase"}) {
        const auto& b = j[branch];
        const double n = b["max_levels"], rate = b["rate_at_max_levels"];
        const bool mono = b["levels_monotone_in_t_p"];
        ok = ok && n >= 1e4 && rate < 0.01 && mono;
        parts += fmt::format("{} {} levels at t_p {} s, max |dG| {:.2e} of range, monotone {}; ", branch, n,
                             b["t_p"].get<double>(), rate, mono ? "yes" : "no");
    }
    return {3, ok, "pulse-width tuning: " + parts + "need >= 1e4 levels and < 1%"};
}

Verdict check_energy(Runner& r)
{
    r.run("fig3b-gate-current");
    const auto j = r.read("fig3b-gate-current", "energy.json")["measured_currents"];
    const double p = j["program_energy_aj"], e = j["erase_energy_aj"];
    const bool ok = within(p, 5.64, 0.564) && within(e, 646.80, 64.68);
    return {4, ok,
            fmt::format("essential write energy: {:.3f} aJ vs 5.64 ({:+.1f}%), {:.1f} aJ vs 646.80 ({:+.1f}%); +/-10%", p,
                        100 * (p / 5.64 - 1), e, 100 * (e / 646.80 - 1))};
}

Verdict check_stdp(Runner& r)
{
    r.run("fig4-stdp");
    const auto j = r.read("fig4-stdp", "stdp.json");
    const double vm = j["v_peak_0minus"], vp = j["v_peak_0plus"];
    const bool shape = j["signs_ok"] && j["ltd_monotone"] && j["ltp_monotone"];
    const bool ok = vm == 12.5 && vp == -14.5 && shape && r.cfg.stdp.n_points == 41;
    return {5, ok,
            fmt::format("STDP: v_peak(0-) = {} V, v_peak(0+) = {} V; sign pattern and branch monotonicity on {} points: {}",
                        vm, vp, r.cfg.stdp.n_points, shape ? "hold" : "violated")};
}

Verdict check_circuit(Runner& r)
{
    r.run("fig6-circuit");
    const auto j = r.read("fig6-circuit", "circuit.json");
    const double ratio = j["leakage_ratio_1F0D_bulk_over_1F2D_soi"], e = j["e_total_1F2D_soi_j"];
    const bool ordered = j["read_current_ordered_by_v_t"];
    const bool ok = ratio >= 1e6 && e <= 3e-15 && ordered;
    return {6, ok,
            fmt::format("circuit: leakage 1F0D-bulk / 1F2D-soi = {:.2e} (>= 1e6), 1F2D-soi write energy {:.3g} fJ "
                        "(<= 3 fJ), read current ordered by V_T: {}",
                        ratio, e * 1e15, ordered ? "yes" : "no")};
}

Verdict check_behavioral(Runner&)
{
    const plasticity::PlasticityParams p{};
    const double ltp = plasticity::delta_g(p, p.g_min, 0.0, plasticity::Branch::ltp);
    const double ltd = plasticity::delta_g(p, p.g_max, 0.0, plasticity::Branch::ltd);
    const std::vector<double> g{0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
    const std::vector<double> dt{-3.0, -1.5, -0.8, -0.3, -0.05, 0.0, 0.05, 0.3, 0.8, 1.5, 3.0};
    const auto fitted = plasticity::fit(plasticity::generate_samples(p, g, dt)).params;
    const double truth[] = {p.dg_max_ltp, p.dg_max_ltd, p.tau_ltp, p.tau_ltd, p.a1, p.a2};
    const double got[] = {fitted.dg_max_ltp, fitted.dg_max_ltd, fitted.tau_ltp,
                          fitted.tau_ltd,    fitted.a1,         fitted.a2};
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
        worst = std::max(worst, std::abs(got[i] / truth[i] - 1.0));
    const bool ok = ltp == 0.07 && ltd == -0.14 && worst < 0.01;
    return {7, ok,
            fmt::format("behavioral model: dG(g_min, 0) = {}, dG(g_max, 0) = {}; zero-noise fit worst relative error "
                        "{:.2e} (< 1%)",
                        ltp, ltd, worst)};
}

Verdict check_snn(Runner& r, double& secs_out)
{
    secs_out = r.run("fig7-snn");
    const auto j = r.read("fig7-snn", "snn.json");
    const double ideal = j["ideal"]["mean_final_accuracy"];
    const double ctf = j["behavioral"]["mean_final_accuracy"];
    const double shift = j["behavioral"]["noise_shift"];
    const bool ok = ideal >= 0.85 && std::abs(ctf - ideal) <= 0.03 && std::abs(shift) <= 0.01 && secs_out < 180.0;
    return {8, ok,
            fmt::format("SNN over {} seeds: ideal {:.4f} (>= 0.85), CTF synapse {:.4f} (gap {:.2f} points, <= 3), "
                        "noise 0.1% shifts mean accuracy by {:+.2f} points (<= 1); recipe {:.1f} s (< 180 s)",
                        r.cfg.snn.seeds, ideal, ctf, 100 * (ctf - ideal), 100 * shift, secs_out)};
}

struct SuiteResult {
    int tests = 0;
    int failures = 0;
    std::vector<std::string> failed;
};

SuiteResult run_suite(const std::string& exe, const fs::path& report)
{
    const std::string cmd = fmt::format("\"{}\" --gtest_brief=1 --gtest_output=json:\"{}\" > \"{}\" 2>&1", exe,
                                        report.string(), (report.string() + ".log"));
    // A non-zero exit only means some tests failed; the report says which.
    if (std::system(cmd.c_str()) == -1)
        throw Error("cannot launch " + exe);
    std::ifstream in(report);
    if (!in)
        throw Error("test binary produced no report: " + exe);
    const auto j = Json::parse(in);
    SuiteResult s;
    s.tests = j["tests"];
    s.failures = j["failures"];
    for (const auto& suite : j["testsuites"])
        for (const auto& t : suite["testsuite"])
            if (t.contains("failures"))
                s.failed.push_back(suite["name"].get<std::string>() + "." + t["name"].get<std::string>());
    return s;
}

Verdict check_invariants(Runner& r)
{
    int tests = 0, failures = 0;
    std::vector<std::string> failed;
    for (const auto& [exe, name] : {std::pair{CTFSYN_UNIT_EXE, "unit"}, std::pair{CTFSYN_ORACLE_EXE, "oracle"}}) {
        const auto s = run_suite(exe, r.root / (std::string(name) + ".json"));
        tests += s.tests;
        failures += s.failures;
        failed.insert(failed.end(), s.failed.begin(), s.failed.end());
    }
    std::string list;
    for (const auto& f : failed)
        list += (list.empty() ? "" : ", ") + f;
    return {9, failures == 0,
            fmt::format("invariant and oracle suites: {} tests, {} failed{}", tests, failures,
                        failed.empty() ? "" : " (" + list + ")")};
}

void info(Runner& r)
{
    const auto e = r.read("fig3b-gate-current", "energy.json");
    const auto& m = e["model_currents"];
    fmt::print("[INFO] model gate currents at V_T = {} V: program {:.3g} A (measured 0.47 nA), erase {:.3g} A "
               "(measured 2.34 nA)\n",
               r.cfg.gate.v_t, m["program_a"].get<double>(), m["erase_a"].get<double>());
    fmt::print("[INFO] electrons per 200 nm cell for a 20 mV step: {} (cv {})\n",
               e["electrons"]["n"].get<double>(), e["electrons"]["cv"].get<double>());
    const auto s = r.read("fig7-snn", "snn.json");
    for (const auto& [rule, v] : s.items())
        fmt::print("[INFO] SNN {}: initial {:.4f}, final {:.4f}, noisy final {:.4f}, per-seed mean |delta| {:.4f}\n",
                   rule, v["mean_initial_accuracy"].get<double>(), v["mean_final_accuracy"].get<double>(),
                   v["mean_final_accuracy_noisy"].get<double>(), v["mean_abs_noise_delta"].get<double>());
    try {
        r.run("calibrate");
        fmt::print("[INFO] calibration: all targets met\n");
    } catch (const NumericError&) {
        const auto c = r.read("calibrate", "calibration.json");
        std::string missed;
        for (const auto& row : c["rows"])
            if (!row["ok"].get<bool>())
                missed += (missed.empty() ? "" : ", ") + row["quantity"].get<std::string>();
        fmt::print("[INFO] calibration: cost {:.3g} after {} iterations, missed {}\n", c["final_cost"].get<double>(),
                   c["iterations"].get<int>(), missed);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks for the CTF synapse library"};
    std::string out = (fs::temp_directory_path() / "ctfsyn_acceptance").string();
    std::vector<int> expect_fail;
    app.add_option("--out", out, "scratch directory for recipe artifacts");
    app.add_option("--expect-fail", expect_fail, "criteria known to fail; exit 0 iff exactly these fail")
        ->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    try {
        Runner r{out};
        fs::remove_all(r.root);
        fs::create_directories(r.root);
        double snn_secs = 0.0;
        const std::vector<Verdict> verdicts{check_traversal(r), check_thresholds(r),     check_levels(r),
                                            check_energy(r),    check_stdp(r),           check_circuit(r),
                                            check_behavioral(r), check_snn(r, snn_secs), check_invariants(r)};
        std::set<int> failed;
        for (const auto& v : verdicts) {
            fmt::print("[{}] {} {}\n", v.pass ? "PASS" : "FAIL", v.id, v.detail);
            if (!v.pass)
                failed.insert(v.id);
        }
        info(r);
        fmt::print("{} of {} criteria pass\n", verdicts.size() - failed.size(), verdicts.size());
        return failed == std::set<int>(expect_fail.begin(), expect_fail.end()) ? 0 : 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "acceptance run aborted: {}\n", e.what());
        return 2;
    }
}
