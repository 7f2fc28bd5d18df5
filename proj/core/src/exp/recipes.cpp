#include "ctfsyn/exp/recipes.hpp"

#include "ctfsyn/circuit/cell.hpp"
#include "ctfsyn/circuit/energy.hpp"
#include "ctfsyn/csv.hpp"
#include "ctfsyn/device/analysis.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/exp/calibrate.hpp"
#include "ctfsyn/parallel.hpp"
#include "ctfsyn/snn/iris.hpp"
#include "ctfsyn/snn/network.hpp"
#include "ctfsyn/waveform/stdp.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>

namespace ctfsyn::exp {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Single writer for a recipe's artifacts; remembers what it wrote so the
/// manifest can hash exactly those files.
class Sink {
public:
    explicit Sink(fs::path dir) : dir_(std::move(dir)) {}

    void csv(const std::string& name, const CsvTable& t)
    {
        t.write(dir_ / name);
        files_.push_back(name);
    }
    void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }
    void text(const std::string& name, const std::string& body)
    {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out)
            throw Error(fmt::format("cannot write '{}'", (dir_ / name).string()));
        out << body;
        files_.push_back(name);
    }
    const std::vector<std::string>& files() const noexcept { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

struct Context {
    const ExperimentConfig& cfg;
    std::uint64_t seed;
    Sink& sink;
};

// trajectories.csv: pulse_index, v_g, t_p, v_t, g_norm. Program rows come
// first (from v_t_min), then erase rows (from v_t_max).
void fig2a(Context& c)
{
    const auto dev = c.cfg.device.build();
    const auto map = c.cfg.device.conductance_map();
    const auto& p = c.cfg.pulse;
    CsvTable t({"pulse_index", "v_g", "t_p", "v_t", "g_norm"});
    auto emit = [&](double v_g, double t_p, double v_start) {
        const auto traj = dev.vt_trajectory(dev.state_at(v_start), {v_g, t_p, p.trajectory_pulses});
        for (std::size_t k = 0; k < traj.size(); ++k)
            t.add_row(std::vector<double>{static_cast<double>(k), v_g, t_p, traj[k],
                                          device::conductance(map, traj[k]).g_norm});
    };
    emit(p.program_v, p.program_t_p, dev.v_t_min());
    emit(p.erase_v, p.erase_t_p, dev.v_t_max());
    c.sink.csv("trajectories.csv", t);

    Json j;
    j["program_pulses_to_cross"] = dev.traverse(p.program_v, p.program_t_p, p.max_pulses).size() - 1;
    j["erase_pulses_to_cross"] = dev.traverse(p.erase_v, p.erase_t_p, p.max_pulses).size() - 1;
    c.sink.json("traversal.json", j);
}

// ranges.csv: v_g, t_p, n_pulses, range_v.
void fig2b(Context& c)
{
    const auto dev = c.cfg.device.build();
    const auto& th = c.cfg.thresholds;
    CsvTable t({"v_g", "t_p", "n_pulses", "range_v"});
    auto branch = [&](const std::vector<double>& volts, double t_p) {
        std::vector<std::pair<double, double>> pts;
        for (double v : volts) {
            const double r = device::pulse_range(dev, v, t_p, th.n_pulses);
            pts.emplace_back(v, r);
            t.add_row(std::vector<double>{v, t_p, static_cast<double>(th.n_pulses), r});
        }
        return device::extract_write_threshold(pts);
    };
    Json j;
    j["program_threshold_v"] = branch(th.program_v, c.cfg.pulse.program_t_p);
    j["erase_threshold_v"] = branch(th.erase_v, c.cfg.pulse.erase_t_p);
    c.sink.csv("ranges.csv", t);
    c.sink.json("thresholds.json", j);
}

// levels.csv: v_g, t_p, n_levels, rate. Traversals run in parallel; rows
// keep the configured order.
void fig2c(Context& c)
{
    const auto dev = c.cfg.device.build();
    const auto map = c.cfg.device.conductance_map();
    const auto& lv = c.cfg.levels;
    struct Job {
        double v_g, t_p;
        device::LevelStats stats{};
    };
    std::vector<Job> jobs;
    for (double t_p : lv.program_t_p)
        jobs.push_back({c.cfg.pulse.program_v, t_p});
    for (double t_p : lv.erase_t_p)
        jobs.push_back({c.cfg.pulse.erase_v, t_p});
    parallel_for(jobs.size(), [&](std::size_t k) {
        const auto traj = dev.traverse(jobs[k].v_g, jobs[k].t_p, lv.max_pulses);
        jobs[k].stats = device::levels_and_learning_rate(traj, map);
    });

    CsvTable t({"v_g", "t_p", "n_levels", "rate"});
    for (const auto& j : jobs)
        t.add_row(std::vector<double>{j.v_g, j.t_p, static_cast<double>(j.stats.n_levels), j.stats.rate});
    c.sink.csv("levels.csv", t);

    auto summarize = [&](bool program) {
        std::vector<const Job*> sel;
        for (const auto& j : jobs)
            if ((j.v_g > 0.0) == program)
                sel.push_back(&j);
        std::sort(sel.begin(), sel.end(), [](const Job* a, const Job* b) { return a->t_p < b->t_p; });
        bool monotone = true;
        for (std::size_t k = 1; k < sel.size(); ++k)
            monotone = monotone && sel[k]->stats.n_levels <= sel[k - 1]->stats.n_levels;
        const Job& finest = *sel.front();
        return Json{{"t_p", finest.t_p},
                    {"max_levels", finest.stats.n_levels},
                    {"rate_at_max_levels", finest.stats.rate},
                    {"levels_monotone_in_t_p", monotone}};
    };
    Json s;
    s["program"] = summarize(true);
    s["erase"] = summarize(false);
    c.sink.json("levels.json", s);
}

// gate_current.csv: v_g, i_tunnel_a, i_blocking_a, dq_dt.
void fig3b(Context& c)
{
    const auto& g = c.cfg.gate;
    const auto dev = c.cfg.device.build();
    const double q = dev.charge_from_vt(g.v_t);
    const auto& geom = dev.geometry();
    CsvTable t({"v_g", "i_tunnel_a", "i_blocking_a", "dq_dt"});
    const auto n = static_cast<std::size_t>(std::floor((g.v_to - g.v_from) / g.v_step + 1e-9)) + 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = g.v_from + static_cast<double>(k) * g.v_step;
        const auto f = device::solve_stack_fields(geom, v, q);
        const double i_box = std::abs(device::fn_current_density(f.e_box, dev.fn().a_box, dev.fn().b_box)) * geom.area;
        t.add_row(std::vector<double>{v, dev.gate_current(v, q), i_box, dev.charge_rate(q, v)});
    }
    c.sink.csv("gate_current.csv", t);

    const auto& p = c.cfg.pulse;
    const double i_prog = dev.gate_current(p.program_v, q);
    const double i_erase = dev.gate_current(p.erase_v, q);
    auto aj = [&](double v, double i, double t_p) {
        return circuit::essential_write_energy(v, i, t_p, g.area_ratio) * 1e18;
    };
    const auto electrons = device::electron_statistics(g.feature_size, g.delta_v_t, g.trap_density);
    Json j;
    j["measured_currents"] = {{"program_a", g.measured_program_i},
                              {"erase_a", g.measured_erase_i},
                              {"program_energy_aj", aj(p.program_v, g.measured_program_i, p.program_t_p)},
                              {"erase_energy_aj", aj(p.erase_v, g.measured_erase_i, p.erase_t_p)}};
    j["model_currents"] = {{"program_a", i_prog},
                           {"erase_a", i_erase},
                           {"program_energy_aj", aj(p.program_v, i_prog, p.program_t_p)},
                           {"erase_energy_aj", aj(p.erase_v, i_erase, p.erase_t_p)}};
    j["area_ratio"] = g.area_ratio;
    j["electrons"] = {{"feature_size_m", g.feature_size},
                      {"delta_v_t", g.delta_v_t},
                      {"n", electrons.n},
                      {"cv", electrons.cv}};
    c.sink.json("energy.json", j);
}

// stdp.csv: dt_s, v_peak_V, dg_norm.
void fig4(Context& c)
{
    const auto dev = c.cfg.device.build();
    const auto& s = c.cfg.stdp;
    const auto grid = waveform::symmetric_grid(s.dt_max, s.n_points);
    const auto curve = waveform::stdp_curve(dev, s.setup, grid);
    CsvTable t({"dt_s", "v_peak_V", "dg_norm"});
    for (const auto& p : curve)
        t.add_row(std::vector<double>{p.dt, p.v_peak, p.dg_norm});
    c.sink.csv("stdp.csv", t);

    const double ds = s.setup.dt_sample;
    const std::vector<double> near_zero{-ds, ds};
    const auto vp = waveform::vpeak_curve(s.setup, near_zero);
    const auto shape = waveform::check_curve_shape(curve);
    Json j;
    j["v_peak_0minus"] = vp[0].v_peak;
    j["v_peak_0plus"] = vp[1].v_peak;
    j["signs_ok"] = shape.signs_ok;
    j["ltd_monotone"] = shape.ltd_monotone;
    j["ltp_monotone"] = shape.ltp_monotone;
    c.sink.json("stdp.json", j);
}

// iv.csv: v_d then one current column per topology; read.csv: v_t, i_d.
void fig6(Context& c)
{
    const auto& cc = c.cfg.circuit;
    const auto topos = circuit::all_topologies();
    std::vector<std::vector<circuit::IvPoint>> sweeps(topos.size());
    parallel_for(topos.size(), [&](std::size_t k) {
        sweeps[k] = circuit::iv_sweep(topos[k], cc.models, cc.sweep_from, cc.sweep_to, cc.sweep_step, cc.write_v_g);
    });
    std::vector<std::string> header{"v_d"};
    for (const auto& t : topos)
        header.push_back("i_" + t.name());
    CsvTable iv(header);
    double max_iv_residual = 0.0;
    for (std::size_t r = 0; r < sweeps[0].size(); ++r) {
        std::vector<double> row{sweeps[0][r].v_d};
        for (const auto& s : sweeps) {
            row.push_back(s[r].i_d);
            max_iv_residual = std::max(max_iv_residual, s[r].residual);
        }
        iv.add_row(row);
    }
    c.sink.csv("iv.csv", iv);

    CsvTable rd({"v_t", "i_d"});
    std::vector<double> read_i;
    const circuit::CellTopology soi2d{true, circuit::Substrate::soi};
    for (double vt : cc.read_v_t) {
        auto m = cc.models;
        m.flash.mode = circuit::MosfetMode::vt_dependent;
        m.flash.v_t = vt;
        const auto sol = circuit::dc_solve(soi2d, m, cc.read_v_d, cc.read_v_g);
        read_i.push_back(sol.i_d);
        rd.add_row(std::vector<double>{vt, sol.i_d});
    }
    c.sink.csv("read.csv", rd);
    bool ordered = true;
    for (std::size_t k = 1; k < read_i.size(); ++k)
        ordered = ordered && (cc.read_v_t[k] > cc.read_v_t[k - 1]) && std::abs(read_i[k]) < std::abs(read_i[k - 1]);

    const auto post = waveform::render(c.cfg.stdp.setup.drain, c.cfg.stdp.setup.dt_sample);
    Json j;
    j["topologies"] = Json::array();
    std::map<std::string, circuit::EnergyReport> by_name;
    for (const auto& t : topos) {
        const auto e = circuit::write_energy(t, cc.models, post, cc.write_v_g, c.cfg.stdp.setup.dt_sample, cc.essential);
        by_name[e.topology] = e;
        j["topologies"].push_back({{"topology", e.topology},
                                   {"e_parasitic_j", e.e_parasitic},
                                   {"e_essential_j", e.e_essential},
                                   {"e_total_j", e.e_total},
                                   {"max_residual_a", e.max_residual}});
    }
    j["leakage_ratio_1F0D_bulk_over_1F2D_soi"] =
        by_name.at("1F0D-bulk").e_parasitic / by_name.at("1F2D-soi").e_parasitic;
    j["e_total_1F2D_soi_j"] = by_name.at("1F2D-soi").e_total;
    j["read_current_ordered_by_v_t"] = ordered;
    j["max_sweep_residual_a"] = max_iv_residual;
    c.sink.json("circuit.json", j);
}

// traces.csv: rule, write_noise, seed, epoch, accuracy (epoch 0 is the
// untrained network).
void fig7(Context& c)
{
    const auto& sc = c.cfg.snn;
    const auto data = snn::load_iris(sc.iris_path);
    CsvTable t({"rule", "write_noise", "seed", "epoch", "accuracy"});
    Json summary = Json::object();
    for (const auto& rule_name : sc.rules) {
        snn::RunSpec spec;
        spec.lif = sc.lif;
        spec.encoding = sc.encoding;
        spec.epochs = sc.epochs;
        spec.train_per_class = sc.train_per_class;
        spec.init_lo = sc.init_lo;
        spec.init_hi = sc.init_hi;
        spec.rule.kind = snn::parse_rule(rule_name);
        spec.rule.params = sc.params;
        spec.rule.eta = sc.eta;
        spec.rule.teacher_delay = sc.teacher_delay;
        spec.rule.device = c.cfg.device.build();
        spec.rule.stdp = c.cfg.stdp.setup;

        const auto st = snn::study(data, spec, derive_seed(c.seed, "snn-" + rule_name, 0), sc.seeds, sc.write_noise);
        auto emit = [&](const std::vector<snn::TrainResult>& runs, double noise) {
            for (std::size_t k = 0; k < runs.size(); ++k) {
                const auto seed = std::to_string(st.run_seeds[k]);
                t.add_row({rule_name, format_number(noise), seed, "0", format_number(runs[k].initial_accuracy)});
                for (std::size_t e = 0; e < runs[k].trace.size(); ++e)
                    t.add_row({rule_name, format_number(noise), seed, std::to_string(e + 1),
                               format_number(runs[k].trace[e])});
            }
        };
        emit(st.clean, 0.0);
        emit(st.noisy, sc.write_noise);
        summary[rule_name] = {{"seeds", sc.seeds},
                              {"mean_initial_accuracy", st.mean_initial},
                              {"mean_final_accuracy", st.mean_final},
                              {"mean_final_accuracy_noisy", st.mean_final_noisy},
                              {"noise_shift", st.mean_final_noisy - st.mean_final},
                              {"mean_abs_noise_delta", st.mean_abs_noise_delta}};
    }
    c.sink.csv("traces.csv", t);
    c.sink.json("snn.json", summary);
}

void calibrate_recipe(Context& c)
{
    const auto rep = calibrate(c.cfg);
    auto to_json_rows = [](const std::vector<CalibrationRow>& rs) {
        Json out = Json::array();
        for (const auto& r : rs)
            out.push_back({{"quantity", r.quantity},
                           {"value", r.value},
                           {"target", r.target},
                           {"lower", r.lower},
                           {"upper", r.upper},
                           {"ok", r.ok}});
        return out;
    };
    std::string table;
    for (const auto& r : rep.rows) {
        table += fmt::format("{}={:.4g} (target {:.4g}, [{:.4g}, {:.4g}]) {}; ", r.quantity, r.value, r.target,
                             r.lower, r.upper, r.ok ? "ok" : "MISS");
    }
    const auto& d = rep.device;
    Json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["final_cost"] = rep.final_cost;
    j["rows"] = to_json_rows(rep.rows);
    j["initial_rows"] = to_json_rows(rep.initial_rows);
    j["device"] = {{"a_tox", d.fn.a_tox},
                   {"b_tox", d.fn.b_tox},
                   {"a_box", d.fn.a_box},
                   {"b_box", d.fn.b_box},
                   {"charge_centroid", d.geometry.charge_centroid},
                   {"v_t_neutral", d.v_t_neutral}};
    c.sink.json("calibration.json", j);
    c.sink.text("calibrated.cfg", fmt::format("device.a_tox = {}\ndevice.b_tox = {}\ndevice.a_box = {}\n"
                                              "device.b_box = {}\ndevice.charge_centroid = {}\n"
                                              "device.v_t_neutral = {}\n",
                                              format_number(d.fn.a_tox), format_number(d.fn.b_tox),
                                              format_number(d.fn.a_box), format_number(d.fn.b_box),
                                              format_number(d.geometry.charge_centroid),
                                              format_number(d.v_t_neutral)));
    if (!rep.converged)
        throw NumericError("calibration missed targets: " + table, rep.final_cost);
}

const std::map<std::string, std::function<void(Context&)>>& table()
{
    static const std::map<std::string, std::function<void(Context&)>> t{
        {"fig2a-trajectories", fig2a}, {"fig2b-thresholds", fig2b}, {"fig2c-levels", fig2c},
        {"fig3b-gate-current", fig3b}, {"fig4-stdp", fig4},         {"fig6-circuit", fig6},
        {"fig7-snn", fig7},            {"calibrate", calibrate_recipe},
    };
    return t;
}

} // namespace

const std::vector<std::string>& recipe_names()
{
    static const std::vector<std::string> names{"fig2a-trajectories", "fig2b-thresholds", "fig2c-levels",
                                                "fig3b-gate-current", "fig4-stdp",        "fig6-circuit",
                                                "fig7-snn",           "calibrate"};
    return names;
}

RunManifest run_recipe(const std::string& name, const ExperimentConfig& cfg, std::uint64_t seed,
                       const fs::path& out_dir)
{
    const auto it = table().find(name);
    if (it == table().end())
        throw DomainError(fmt::format("unknown recipe '{}'", name));
    if (auto v = validate(cfg); !v.empty())
        throw ConfigError(std::move(v));

    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    Sink sink(out_dir);
    Context ctx{cfg, seed, sink};
    it->second(ctx);

    RunManifest m;
    m.recipe = name;
    m.seed = seed;
    m.version = version();
    m.config_sha256 = sha256_hex(dump(cfg));
    for (const auto& f : sink.files())
        m.outputs.push_back({f, sha256_file(out_dir / f), fs::file_size(out_dir / f)});
    m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_dir / "manifest.json", m);
    return m;
}

} // namespace ctfsyn::exp
