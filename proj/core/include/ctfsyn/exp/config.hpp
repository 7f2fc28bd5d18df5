#pragma once

#include "ctfsyn/circuit/cell.hpp"
#include "ctfsyn/circuit/energy.hpp"
#include "ctfsyn/device/analysis.hpp"
#include "ctfsyn/device/trap.hpp"
#include "ctfsyn/plasticity/model.hpp"
#include "ctfsyn/snn/network.hpp"
#include "ctfsyn/waveform/stdp.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ctfsyn::exp {

struct DeviceConfig {
    device::StackGeometry geometry{};
    device::FnParams fn{};
    double v_t_neutral = 1.4786733758475081;
    double v_t_min = -1.3;
    double v_t_max = -0.3;
    device::IntegratorOptions integrator{};
    double conductance_k = 1e-6;

    device::CtfDevice build() const;
    device::ConductanceMap conductance_map() const { return {conductance_k, v_t_min, v_t_max}; }
};

struct PulseConfig {
    double program_v = 12.5;
    double program_t_p = 1e-3;
    double erase_v = -14.5;
    double erase_t_p = 20e-3;
    std::size_t trajectory_pulses = 1000;
    std::size_t max_pulses = 100000;
};

struct ThresholdConfig {
    std::vector<double> program_v{10.5, 11.0, 11.5, 12.0, 12.5};
    std::vector<double> erase_v{-12.5, -13.0, -13.5, -14.0, -14.5};
    std::size_t n_pulses = 1000;
};

struct LevelsConfig {
    std::vector<double> program_t_p{1e-4, 2e-4, 5e-4, 1e-3, 2e-3};
    std::vector<double> erase_t_p{1e-3, 2e-3, 5e-3, 10e-3, 20e-3};
    std::size_t max_pulses = 400000;
};

struct GateConfig {
    double v_from = -16.0;
    double v_to = 16.0;
    double v_step = 0.25;
    double v_t = -0.8; // state at which the current is evaluated
    double measured_program_i = 0.47e-9;
    double measured_erase_i = 2.34e-9;
    double area_ratio = 1e6;
    double feature_size = 200e-9;   // m
    double delta_v_t = 20e-3;       // V
    double trap_density = 2e12;     // electrons per cm² per volt
};

struct StdpConfig {
    waveform::StdpSetup setup{};
    double dt_max = 0.03;
    std::size_t n_points = 41;
};

struct CircuitConfig {
    circuit::CellModels models{};
    double sweep_from = -8.0;
    double sweep_to = 8.0;
    double sweep_step = 0.01;
    double read_v_d = -7.0;
    double read_v_g = 0.2; // v_t_max + 0.5 with the default window
    std::vector<double> read_v_t{-1.3, -1.05, -0.8, -0.55, -0.3};
    double write_v_g = 0.0;
    circuit::EssentialWrite essential{};
};

struct SnnConfig {
    std::filesystem::path iris_path;
    snn::LifParams lif{};
    snn::Encoding encoding = snn::Encoding::paired;
    plasticity::PlasticityParams params{};
    double eta = 0.01;
    double teacher_delay = 0.01;
    std::size_t epochs = 50;
    std::size_t seeds = 20;
    std::size_t train_per_class = 40;
    double init_lo = 0.3;
    double init_hi = 0.7;
    std::vector<std::string> rules{"ideal", "behavioral"};
    double write_noise = 1e-3;
};

struct CalibrateConfig {
    double target_program_threshold = 9.8;
    double target_erase_threshold = -11.5;
    double threshold_tol = 0.5;
    double target_pulses = 1000.0;
    double pulses_tol = 200.0;
    double target_program_i = 0.47e-9;
    double target_erase_i = 2.34e-9;
    double current_factor = 2.0;
    int max_iterations = 200;
};

struct ExperimentConfig {
    DeviceConfig device;
    PulseConfig pulse;
    ThresholdConfig thresholds;
    LevelsConfig levels;
    GateConfig gate;
    StdpConfig stdp;
    CircuitConfig circuit;
    SnnConfig snn;
    CalibrateConfig calibrate;
};

/// Built-in defaults; the Iris path points at the data directory shipped
/// with the sources.
ExperimentConfig default_config();

/// Parses `key = value` lines ('#' starts a comment, lists are comma
/// separated). Every problem found is collected and thrown together as a
/// ConfigError, each message prefixed with its line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Cross-field checks that a single key cannot express (windows, sweep
/// ordering, module invariants). Returns violations instead of throwing.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Every key with its current value, one `key = value` line each, in a fixed
/// order. parse_config(dump(c)) reproduces c.
std::string dump(const ExperimentConfig& cfg);

struct KeyInfo {
    std::string key;
    std::string doc;
    std::string default_value;
};
std::vector<KeyInfo> config_keys();

} // namespace ctfsyn::exp
