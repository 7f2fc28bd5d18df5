#include "ctfsyn/exp/config.hpp"

#include "ctfsyn/csv.hpp"
#include "ctfsyn/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#ifndef CTFSYN_DEFAULT_IRIS_PATH
#define CTFSYN_DEFAULT_IRIS_PATH "data/iris.csv"
#endif

namespace ctfsyn::exp {

device::CtfDevice DeviceConfig::build() const
{
    return device::CtfDevice(geometry, fn, v_t_neutral, v_t_min, v_t_max, integrator);
}

ExperimentConfig default_config()
{
    ExperimentConfig c;
    c.snn.iris_path = CTFSYN_DEFAULT_IRIS_PATH;
    return c;
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ','))
        out.push_back(trim(item));
    if (out.size() == 1 && out[0].empty())
        out.clear();
    return out;
}

double to_double(const std::string& v)
{
    const double x = parse_number(v);
    if (!std::isfinite(x))
        throw DomainError("value must be finite");
    return x;
}

std::size_t to_count(const std::string& v)
{
    const double x = to_double(v);
    if (x < 0.0 || x != std::floor(x) || x > 1e15)
        throw DomainError(fmt::format("expected a non-negative integer, got '{}'", v));
    return static_cast<std::size_t>(x);
}

using Check = std::function<void(double)>;

Check any()
{
    return [](double) {};
}
Check positive()
{
    return [](double x) {
        if (!(x > 0.0))
            throw DomainError(fmt::format("must be > 0 (got {})", x));
    };
}
Check non_negative()
{
    return [](double x) {
        if (!(x >= 0.0))
            throw DomainError(fmt::format("must be >= 0 (got {})", x));
    };
}
Check in_range(double lo, double hi)
{
    return [lo, hi](double x) {
        if (!(x >= lo && x <= hi))
            throw DomainError(fmt::format("must lie in [{}, {}] (got {})", lo, hi, x));
    };
}

struct Entry {
    std::string key;
    std::string doc;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
using Access = std::function<T&(ExperimentConfig&)>;

template <class T>
std::function<std::string(const ExperimentConfig&)> getter(Access<T> a, std::function<std::string(const T&)> fmt_fn)
{
    return [a, fmt_fn](const ExperimentConfig& c) { return fmt_fn(a(const_cast<ExperimentConfig&>(c))); };
}

Entry num(std::string key, std::string doc, Access<double> a, Check check)
{
    return {std::move(key), std::move(doc),
            [a, check](ExperimentConfig& c, const std::string& v) {
                const double x = to_double(v);
                check(x);
                a(c) = x;
            },
            getter<double>(a, [](const double& x) { return format_number(x); })};
}

Entry count(std::string key, std::string doc, Access<std::size_t> a, std::size_t min_value)
{
    return {std::move(key), std::move(doc),
            [a, min_value](ExperimentConfig& c, const std::string& v) {
                const std::size_t n = to_count(v);
                if (n < min_value)
                    throw DomainError(fmt::format("must be >= {} (got {})", min_value, n));
                a(c) = n;
            },
            getter<std::size_t>(a, [](const std::size_t& n) { return std::to_string(n); })};
}

Entry integer(std::string key, std::string doc, Access<int> a, int min_value)
{
    return {std::move(key), std::move(doc),
            [a, min_value](ExperimentConfig& c, const std::string& v) {
                const std::size_t n = to_count(v);
                if (n < static_cast<std::size_t>(min_value) || n > 1'000'000'000)
                    throw DomainError(fmt::format("must be an integer >= {} (got {})", min_value, v));
                a(c) = static_cast<int>(n);
            },
            getter<int>(a, [](const int& n) { return std::to_string(n); })};
}

Entry num_list(std::string key, std::string doc, Access<std::vector<double>> a, Check check)
{
    return {std::move(key), std::move(doc),
            [a, check](ExperimentConfig& c, const std::string& v) {
                std::vector<double> xs;
                for (const auto& item : split_list(v)) {
                    const double x = to_double(item);
                    check(x);
                    xs.push_back(x);
                }
                if (xs.empty())
                    throw DomainError("list must not be empty");
                a(c) = std::move(xs);
            },
            getter<std::vector<double>>(a, [](const std::vector<double>& xs) {
                std::string s;
                for (std::size_t i = 0; i < xs.size(); ++i)
                    s += (i ? ", " : "") + format_number(xs[i]);
                return s;
            })};
}

template <class E>
Entry enumeration(std::string key, std::string doc, Access<E> a, std::function<E(const std::string&)> parse,
                  std::function<std::string(E)> show)
{
    return {std::move(key), std::move(doc), [a, parse](ExperimentConfig& c, const std::string& v) { a(c) = parse(v); },
            getter<E>(a, [show](const E& e) { return show(e); })};
}

std::string show_mosfet_mode(circuit::MosfetMode m)
{
    return m == circuit::MosfetMode::on_worst_case ? "on_worst_case" : "vt_dependent";
}

const std::vector<Entry>& registry()
{
    using C = ExperimentConfig;
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        // Device stack and transport.
        e.push_back(num("device.d_tox", "tunnel oxide thickness, m", [](C& c) -> double& { return c.device.geometry.d_tox; }, positive()));
        e.push_back(num("device.d_ctl", "trap layer thickness, m", [](C& c) -> double& { return c.device.geometry.d_ctl; }, positive()));
        e.push_back(num("device.d_box", "blocking oxide thickness, m", [](C& c) -> double& { return c.device.geometry.d_box; }, positive()));
        e.push_back(num("device.eps_tox", "tunnel oxide relative permittivity", [](C& c) -> double& { return c.device.geometry.eps_tox; }, positive()));
        e.push_back(num("device.eps_ctl", "trap layer relative permittivity", [](C& c) -> double& { return c.device.geometry.eps_ctl; }, positive()));
        e.push_back(num("device.eps_box", "blocking oxide relative permittivity", [](C& c) -> double& { return c.device.geometry.eps_box; }, positive()));
        e.push_back(num("device.area", "gate area, m^2", [](C& c) -> double& { return c.device.geometry.area; }, positive()));
        e.push_back(num("device.charge_centroid", "charge sheet position as a fraction of d_ctl from the tunnel oxide", [](C& c) -> double& { return c.device.geometry.charge_centroid; }, in_range(0.0, 1.0)));
        e.push_back(num("device.a_tox", "FN prefactor, tunnel oxide, A/V^2", [](C& c) -> double& { return c.device.fn.a_tox; }, positive()));
        e.push_back(num("device.b_tox", "FN exponent, tunnel oxide, V/m", [](C& c) -> double& { return c.device.fn.b_tox; }, positive()));
        e.push_back(num("device.a_box", "FN prefactor, blocking oxide, A/V^2", [](C& c) -> double& { return c.device.fn.a_box; }, positive()));
        e.push_back(num("device.b_box", "FN exponent, blocking oxide, V/m", [](C& c) -> double& { return c.device.fn.b_box; }, positive()));
        e.push_back(num("device.v_t_neutral", "threshold with an empty trap layer, V", [](C& c) -> double& { return c.device.v_t_neutral; }, any()));
        e.push_back(num("device.v_t_min", "lower edge of the operating window, V", [](C& c) -> double& { return c.device.v_t_min; }, any()));
        e.push_back(num("device.v_t_max", "upper edge of the operating window, V", [](C& c) -> double& { return c.device.v_t_max; }, any()));
        e.push_back(num("device.rtol", "integrator relative tolerance", [](C& c) -> double& { return c.device.integrator.rtol; }, in_range(1e-14, 1e-2)));
        e.push_back(num("device.atol_vt", "integrator absolute tolerance in volts of v_t", [](C& c) -> double& { return c.device.integrator.atol_vt; }, positive()));
        e.push_back(num("device.conductance_k", "read transconductance K, S/V", [](C& c) -> double& { return c.device.conductance_k; }, positive()));
        // Identical-pulse trains.
        e.push_back(num("pulse.program_v", "program (LTD) gate voltage, V", [](C& c) -> double& { return c.pulse.program_v; }, positive()));
        e.push_back(num("pulse.program_t_p", "program pulse width, s", [](C& c) -> double& { return c.pulse.program_t_p; }, positive()));
        e.push_back(num("pulse.erase_v", "erase (LTP) gate voltage, V", [](C& c) -> double& { return c.pulse.erase_v; },
                        [](double x) {
                            if (!(x < 0.0))
                                throw DomainError(fmt::format("must be < 0 (got {})", x));
                        }));
        e.push_back(num("pulse.erase_t_p", "erase pulse width, s", [](C& c) -> double& { return c.pulse.erase_t_p; }, positive()));
        e.push_back(count("pulse.trajectory_pulses", "pulses per exported trajectory", [](C& c) -> std::size_t& { return c.pulse.trajectory_pulses; }, 1));
        e.push_back(count("pulse.max_pulses", "pulse budget for a window traversal", [](C& c) -> std::size_t& { return c.pulse.max_pulses; }, 1));
        // Threshold extraction.
        e.push_back(num_list("thresholds.program_v", "program voltages for the range-vs-voltage line, V", [](C& c) -> std::vector<double>& { return c.thresholds.program_v; }, positive()));
        e.push_back(num_list("thresholds.erase_v", "erase voltages for the range-vs-voltage line, V", [](C& c) -> std::vector<double>& { return c.thresholds.erase_v; },
                             [](double x) {
                                 if (!(x < 0.0))
                                     throw DomainError(fmt::format("erase voltages must be < 0 (got {})", x));
                             }));
        e.push_back(count("thresholds.n_pulses", "pulses per range measurement", [](C& c) -> std::size_t& { return c.thresholds.n_pulses; }, 1));
        // Pulse-width tuning.
        e.push_back(num_list("levels.program_t_p", "program pulse widths, s", [](C& c) -> std::vector<double>& { return c.levels.program_t_p; }, positive()));
        e.push_back(num_list("levels.erase_t_p", "erase pulse widths, s", [](C& c) -> std::vector<double>& { return c.levels.erase_t_p; }, positive()));
        e.push_back(count("levels.max_pulses", "pulse budget per traversal", [](C& c) -> std::size_t& { return c.levels.max_pulses; }, 1));
        // Gate current, energy and electron statistics.
        e.push_back(num("gate.v_from", "sweep start, V", [](C& c) -> double& { return c.gate.v_from; }, any()));
        e.push_back(num("gate.v_to", "sweep end, V", [](C& c) -> double& { return c.gate.v_to; }, any()));
        e.push_back(num("gate.v_step", "sweep step, V", [](C& c) -> double& { return c.gate.v_step; }, positive()));
        e.push_back(num("gate.v_t", "device state for the sweep, V", [](C& c) -> double& { return c.gate.v_t; }, any()));
        e.push_back(num("gate.measured_program_i", "measured program gate current, A", [](C& c) -> double& { return c.gate.measured_program_i; }, positive()));
        e.push_back(num("gate.measured_erase_i", "measured erase gate current, A", [](C& c) -> double& { return c.gate.measured_erase_i; }, positive()));
        e.push_back(num("gate.area_ratio", "test-device to scaled-cell area ratio", [](C& c) -> double& { return c.gate.area_ratio; }, positive()));
        e.push_back(num("gate.feature_size", "scaled cell edge, m", [](C& c) -> double& { return c.gate.feature_size; }, positive()));
        e.push_back(num("gate.delta_v_t", "threshold shift per stored level, V", [](C& c) -> double& { return c.gate.delta_v_t; }, positive()));
        e.push_back(num("gate.trap_density", "stored electrons per cm^2 per volt of V_T", [](C& c) -> double& { return c.gate.trap_density; }, positive()));
        // STDP.
        e.push_back(num("stdp.gate_v_pos", "pre spike height, V", [](C& c) -> double& { return c.stdp.setup.gate.v_pos; }, any()));
        e.push_back(num("stdp.gate_v_neg", "pre tail start, V", [](C& c) -> double& { return c.stdp.setup.gate.v_neg; }, any()));
        e.push_back(num("stdp.gate_t_spike", "pre spike width, s", [](C& c) -> double& { return c.stdp.setup.gate.t_spike; }, positive()));
        e.push_back(num("stdp.gate_t_tail", "pre tail duration, s", [](C& c) -> double& { return c.stdp.setup.gate.t_tail; }, positive()));
        e.push_back(enumeration<waveform::Shape>("stdp.gate_shape", "spike_then_tail or tail_then_spike", [](C& c) -> waveform::Shape& { return c.stdp.setup.gate.shape; }, waveform::parse_shape, [](waveform::Shape s) { return waveform::to_string(s); }));
        e.push_back(num("stdp.drain_v_pos", "post spike height, V", [](C& c) -> double& { return c.stdp.setup.drain.v_pos; }, any()));
        e.push_back(num("stdp.drain_v_neg", "post tail start, V", [](C& c) -> double& { return c.stdp.setup.drain.v_neg; }, any()));
        e.push_back(num("stdp.drain_t_spike", "post spike width, s", [](C& c) -> double& { return c.stdp.setup.drain.t_spike; }, positive()));
        e.push_back(num("stdp.drain_t_tail", "post tail duration, s", [](C& c) -> double& { return c.stdp.setup.drain.t_tail; }, positive()));
        e.push_back(enumeration<waveform::Shape>("stdp.drain_shape", "spike_then_tail or tail_then_spike", [](C& c) -> waveform::Shape& { return c.stdp.setup.drain.shape; }, waveform::parse_shape, [](waveform::Shape s) { return waveform::to_string(s); }));
        e.push_back(num("stdp.dt_sample", "waveform sampling step, s", [](C& c) -> double& { return c.stdp.setup.dt_sample; }, positive()));
        e.push_back(num("stdp.dt_max", "half-width of the timing grid, s", [](C& c) -> double& { return c.stdp.dt_max; }, positive()));
        e.push_back(count("stdp.n_points", "points on the timing grid", [](C& c) -> std::size_t& { return c.stdp.n_points; }, 2));
        // Circuit.
        e.push_back(num("circuit.flash_k", "flash transconductance, A/V^2", [](C& c) -> double& { return c.circuit.models.flash.k; }, positive()));
        e.push_back(num("circuit.flash_v_t", "flash threshold for sweeps and write energy, V", [](C& c) -> double& { return c.circuit.models.flash.v_t; }, any()));
        e.push_back(enumeration<circuit::MosfetMode>("circuit.flash_mode", "on_worst_case or vt_dependent", [](C& c) -> circuit::MosfetMode& { return c.circuit.models.flash.mode; }, circuit::parse_mosfet_mode, show_mosfet_mode));
        e.push_back(num("circuit.flash_v_ov_on", "overdrive in worst-case mode, V", [](C& c) -> double& { return c.circuit.models.flash.v_ov_on; }, positive()));
        e.push_back(num("circuit.sd_i_s", "standard diode saturation current, A", [](C& c) -> double& { return c.circuit.models.sd.i_s; }, positive()));
        e.push_back(num("circuit.sd_n", "standard diode ideality", [](C& c) -> double& { return c.circuit.models.sd.n_ideality; }, positive()));
        e.push_back(num("circuit.zd_i_s", "Zener saturation current, A", [](C& c) -> double& { return c.circuit.models.zd.i_s; }, positive()));
        e.push_back(num("circuit.zd_n", "Zener ideality", [](C& c) -> double& { return c.circuit.models.zd.n_ideality; }, positive()));
        e.push_back(num("circuit.zd_v_bv", "Zener breakdown voltage (negative), V", [](C& c) -> double& { return *c.circuit.models.zd.v_bv; },
                        [](double x) {
                            if (!(x < 0.0))
                                throw DomainError(fmt::format("must be < 0 (got {})", x));
                        }));
        e.push_back(num("circuit.zd_i_bv", "Zener current at breakdown, A", [](C& c) -> double& { return c.circuit.models.zd.i_bv; }, positive()));
        e.push_back(num("circuit.body_i_s", "bulk drain junction saturation current, A", [](C& c) -> double& { return c.circuit.models.body.i_s; }, positive()));
        e.push_back(num("circuit.body_r_series", "bulk junction series resistance, ohm", [](C& c) -> double& { return c.circuit.models.body.r_series; }, non_negative()));
        e.push_back(num("circuit.sweep_from", "IV sweep start, V", [](C& c) -> double& { return c.circuit.sweep_from; }, any()));
        e.push_back(num("circuit.sweep_to", "IV sweep end, V", [](C& c) -> double& { return c.circuit.sweep_to; }, any()));
        e.push_back(num("circuit.sweep_step", "IV sweep step, V", [](C& c) -> double& { return c.circuit.sweep_step; }, positive()));
        e.push_back(num("circuit.read_v_d", "read drain voltage, V", [](C& c) -> double& { return c.circuit.read_v_d; }, any()));
        e.push_back(num("circuit.read_v_g", "read gate voltage, V", [](C& c) -> double& { return c.circuit.read_v_g; }, any()));
        e.push_back(num_list("circuit.read_v_t", "flash thresholds for the read comparison, V", [](C& c) -> std::vector<double>& { return c.circuit.read_v_t; }, any()));
        e.push_back(num("circuit.write_v_g", "gate voltage held during the drain write waveform, V", [](C& c) -> double& { return c.circuit.write_v_g; }, any()));
        e.push_back(num("circuit.essential_v", "essential write voltage magnitude, V", [](C& c) -> double& { return c.circuit.essential.v; }, positive()));
        e.push_back(num("circuit.essential_i", "essential write gate current, A", [](C& c) -> double& { return c.circuit.essential.i_gate; }, positive()));
        e.push_back(num("circuit.essential_t_p", "essential write pulse width, s", [](C& c) -> double& { return c.circuit.essential.t_p; }, positive()));
        e.push_back(num("circuit.area_ratio", "area ratio for the essential write energy", [](C& c) -> double& { return c.circuit.essential.area_ratio; }, positive()));
        // SNN.
        e.push_back({"snn.iris_path", "Iris CSV; relative paths resolve against the config file",
                     [](C& c, const std::string& v) {
                         if (v.empty())
                             throw DomainError("path must not be empty");
                         c.snn.iris_path = v;
                     },
                     [](const C& c) { return c.snn.iris_path.string(); }});
        e.push_back(num("snn.tau_mem", "membrane time constant, s", [](C& c) -> double& { return c.snn.lif.tau_mem; }, positive()));
        e.push_back(num("snn.v_thresh", "firing threshold", [](C& c) -> double& { return c.snn.lif.v_thresh; }, positive()));
        e.push_back(num("snn.refractory", "refractory period, s", [](C& c) -> double& { return c.snn.lif.refractory; }, non_negative()));
        e.push_back(num("snn.tick", "simulation tick, s", [](C& c) -> double& { return c.snn.lif.tick; }, positive()));
        e.push_back(num("snn.window", "encoding window, s", [](C& c) -> double& { return c.snn.lif.window; }, positive()));
        e.push_back(num("snn.tail", "simulated time after the window, s", [](C& c) -> double& { return c.snn.lif.tail; }, non_negative()));
        e.push_back(enumeration<snn::Encoding>("snn.encoding", "latency or paired", [](C& c) -> snn::Encoding& { return c.snn.encoding; }, snn::parse_encoding, [](snn::Encoding x) { return snn::to_string(x); }));
        e.push_back(num("snn.dg_max_ltp", "behavioral LTP amplitude", [](C& c) -> double& { return c.snn.params.dg_max_ltp; }, positive()));
        e.push_back(num("snn.dg_max_ltd", "behavioral LTD amplitude (negative)", [](C& c) -> double& { return c.snn.params.dg_max_ltd; },
                        [](double x) {
                            if (!(x < 0.0))
                                throw DomainError(fmt::format("must be < 0 (got {})", x));
                        }));
        e.push_back(num("snn.tau_ltp", "LTP time constant, s", [](C& c) -> double& { return c.snn.params.tau_ltp; }, positive()));
        e.push_back(num("snn.tau_ltd", "LTD time constant, s", [](C& c) -> double& { return c.snn.params.tau_ltd; }, positive()));
        e.push_back(num("snn.a1", "LTP weight-dependence exponent", [](C& c) -> double& { return c.snn.params.a1; }, non_negative()));
        e.push_back(num("snn.a2", "LTD weight-dependence exponent", [](C& c) -> double& { return c.snn.params.a2; }, non_negative()));
        e.push_back(num("snn.eta", "ideal rule amplitude", [](C& c) -> double& { return c.snn.eta; }, positive()));
        e.push_back(num("snn.teacher_delay", "teacher spike delay after the first input, s", [](C& c) -> double& { return c.snn.teacher_delay; }, non_negative()));
        e.push_back(count("snn.epochs", "training epochs", [](C& c) -> std::size_t& { return c.snn.epochs; }, 0));
        e.push_back(count("snn.seeds", "independent seeds per rule", [](C& c) -> std::size_t& { return c.snn.seeds; }, 1));
        e.push_back(count("snn.train_per_class", "training rows per class", [](C& c) -> std::size_t& { return c.snn.train_per_class; }, 1));
        e.push_back(num("snn.init_lo", "initial weight lower bound", [](C& c) -> double& { return c.snn.init_lo; }, in_range(0.0, 1.0)));
        e.push_back(num("snn.init_hi", "initial weight upper bound", [](C& c) -> double& { return c.snn.init_hi; }, in_range(0.0, 1.0)));
        e.push_back({"snn.rules", "comma list of ideal, behavioral, device",
                     [](C& c, const std::string& v) {
                         auto names = split_list(v);
                         if (names.empty())
                             throw DomainError("list must not be empty");
                         for (const auto& n : names)
                             snn::parse_rule(n);
                         c.snn.rules = std::move(names);
                     },
                     [](const C& c) {
                         std::string s;
                         for (std::size_t i = 0; i < c.snn.rules.size(); ++i)
                             s += (i ? ", " : "") + c.snn.rules[i];
                         return s;
                     }});
        e.push_back(num("snn.write_noise", "sigma/range of write noise for the robustness runs", [](C& c) -> double& { return c.snn.write_noise; }, non_negative()));
        // Calibration targets.
        e.push_back(num("calibrate.program_threshold", "target program threshold, V", [](C& c) -> double& { return c.calibrate.target_program_threshold; }, positive()));
        e.push_back(num("calibrate.erase_threshold", "target erase threshold, V", [](C& c) -> double& { return c.calibrate.target_erase_threshold; }, any()));
        e.push_back(num("calibrate.threshold_tol", "threshold tolerance, V", [](C& c) -> double& { return c.calibrate.threshold_tol; }, positive()));
        e.push_back(num("calibrate.pulses", "target pulses to cross the window", [](C& c) -> double& { return c.calibrate.target_pulses; }, positive()));
        e.push_back(num("calibrate.pulses_tol", "tolerance on the pulse count", [](C& c) -> double& { return c.calibrate.pulses_tol; }, positive()));
        e.push_back(num("calibrate.program_i", "target program gate current, A", [](C& c) -> double& { return c.calibrate.target_program_i; }, positive()));
        e.push_back(num("calibrate.erase_i", "target erase gate current, A", [](C& c) -> double& { return c.calibrate.target_erase_i; }, positive()));
        e.push_back(num("calibrate.current_factor", "allowed multiplicative error on currents", [](C& c) -> double& { return c.calibrate.current_factor; }, [](double x) {
                            if (!(x > 1.0))
                                throw DomainError(fmt::format("must be > 1 (got {})", x));
                        }));
        e.push_back(integer("calibrate.max_iterations", "solver iteration budget", [](C& c) -> int& { return c.calibrate.max_iterations; }, 1));
        return e;
    }();
    return entries;
}

template <class F>
void collect(std::vector<std::string>& out, const std::string& where, F&& f)
{
    try {
        f();
    } catch (const std::exception& e) {
        out.push_back(where + ": " + e.what());
    }
}

void check_sorted_sweep(std::vector<std::string>& out, const std::string& name, double from, double to)
{
    if (!(from < to))
        out.push_back(fmt::format("{}: sweep start {} must be below its end {}", name, from, to));
}

} // namespace

std::vector<std::string> validate(const ExperimentConfig& c)
{
    std::vector<std::string> v;
    collect(v, "device", [&] { c.device.build(); });
    if (!(c.device.v_t_min < c.device.v_t_max))
        v.push_back("device: v_t_min must be below v_t_max");
    if (c.thresholds.program_v.size() < 2 || c.thresholds.erase_v.size() < 2)
        v.push_back("thresholds: each voltage list needs at least two entries");
    check_sorted_sweep(v, "gate", c.gate.v_from, c.gate.v_to);
    if (!(c.gate.v_t >= c.device.v_t_min && c.gate.v_t <= c.device.v_t_max))
        v.push_back("gate.v_t: must lie inside the device window");
    collect(v, "stdp", [&] { c.stdp.setup.validate(); });
    collect(v, "circuit", [&] { c.circuit.models.validate(); });
    check_sorted_sweep(v, "circuit", c.circuit.sweep_from, c.circuit.sweep_to);
    collect(v, "snn", [&] { c.snn.lif.validate(); });
    collect(v, "snn", [&] { c.snn.params.validate(); });
    if (!(c.snn.init_lo <= c.snn.init_hi))
        v.push_back("snn: init_lo must not exceed init_hi");
    return v;
}

ExperimentConfig parse_config(const std::string& text)
{
    std::map<std::string, const Entry*> by_key;
    for (const auto& e : registry())
        by_key.emplace(e.key, &e);

    ExperimentConfig cfg = default_config();
    std::vector<std::string> errors;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            errors.push_back(fmt::format("line {}: unknown key '{}'", line_no, key));
            continue;
        }
        if (const auto [prev, fresh] = seen.emplace(key, line_no); !fresh) {
            errors.push_back(fmt::format("line {}: '{}' already set on line {}", line_no, key, prev->second));
            continue;
        }
        try {
            it->second->set(cfg, value);
        } catch (const std::exception& e) {
            errors.push_back(fmt::format("line {}: {}: {}", line_no, key, e.what()));
        }
    }
    if (errors.empty())
        errors = validate(cfg);
    if (!errors.empty())
        throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError({fmt::format("cannot open config file '{}'", path.string())});
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_config(buf.str());
    if (cfg.snn.iris_path != default_config().snn.iris_path && cfg.snn.iris_path.is_relative())
        cfg.snn.iris_path = path.parent_path() / cfg.snn.iris_path;
    return cfg;
}

std::string dump(const ExperimentConfig& cfg)
{
    std::string out;
    for (const auto& e : registry())
        out += e.key + " = " + e.get(cfg) + "\n";
    return out;
}

std::vector<KeyInfo> config_keys()
{
    const ExperimentConfig d = default_config();
    std::vector<KeyInfo> out;
    for (const auto& e : registry())
        out.push_back({e.key, e.doc, e.get(d)});
    return out;
}

} // namespace ctfsyn::exp
