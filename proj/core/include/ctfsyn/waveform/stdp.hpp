#pragma once

#include "ctfsyn/device/trap.hpp"
#include "ctfsyn/waveform/waveform.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ctfsyn::waveform {

/// Pre neuron drives the gate, post neuron drives the drain.
struct StdpSetup {
    WaveformTemplate gate = gate_template();
    WaveformTemplate drain = drain_template();
    double dt_sample = 1e-4;

    void validate() const;
};

struct StdpPoint {
    double dt;      // t_post - t_pre, s
    double v_peak;  // branch peak, V
    double dg_norm; // change of normalized conductance
};

struct VpeakPoint {
    double dt;
    double v_peak;
};

/// Branch peak (see Superposition::branch_peak) for each offset.
std::vector<VpeakPoint> vpeak_curve(const StdpSetup& setup, std::span<const double> dt_grid);

/// Drives the device with the superposed trace at offset dt. Without an
/// explicit starting conductance the causal branch (dt >= 0) starts at Ḡ = 0
/// and the acausal branch at Ḡ = 1.
StdpPoint stdp_point(const device::CtfDevice& dev, const StdpSetup& setup, double dt,
                     std::optional<double> g_init = std::nullopt);

/// Points are independent and evaluated in parallel; output order follows the grid.
std::vector<StdpPoint> stdp_curve(const device::CtfDevice& dev, const StdpSetup& setup,
                                  std::span<const double> dt_grid);

/// Shape of a measured curve: the acausal branch (dt < 0) never potentiates
/// and the causal branch (dt > 0) never depresses, and on each branch the
/// magnitude does not grow as |dt| grows.
struct CurveShape {
    bool signs_ok = true;
    bool ltd_monotone = true;
    bool ltp_monotone = true;
    bool ok() const noexcept { return signs_ok && ltd_monotone && ltp_monotone; }
};
CurveShape check_curve_shape(std::span<const StdpPoint> curve);

/// n evenly spaced points on [-dt_max, dt_max].
std::vector<double> symmetric_grid(double dt_max, std::size_t n);

} // namespace ctfsyn::waveform
