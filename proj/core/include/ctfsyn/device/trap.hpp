#pragma once

#include "ctfsyn/device/stack.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ctfsyn::device {

struct TrapState {
    double q_trap = 0.0; // C/m², electrons stored => negative
    double v_t = 0.0;
    double v_t_min = -1.3;
    double v_t_max = -0.3;
    /// Set when the last operation had to pull v_t back into the window.
    bool clamped = false;

    double range() const noexcept { return v_t_max - v_t_min; }
};

struct PulseSpec {
    double v_g = 0.0;
    double t_p = 0.0;
    std::size_t n_pulses = 1;
};

/// A constant-voltage stretch of a drive waveform.
struct Segment {
    double v_g;
    double duration;
};

struct IntegratorOptions {
    double rtol = 1e-6;
    double atol_vt = 1e-12;     // absolute tolerance expressed in volts of v_t
    double min_step = 1e-16;    // s; smaller accepted steps count as underflow
    std::size_t max_steps = 2'000'000;
};

/// One charge-trap-flash device: stack electrostatics, FN charge transport
/// and the affine charge -> threshold map, with an operating V_T window.
class CtfDevice {
public:
    CtfDevice();
    CtfDevice(StackGeometry geom, FnParams fn, double v_t_neutral, double v_t_min, double v_t_max,
              IntegratorOptions opts = {});

    const StackGeometry& geometry() const noexcept { return geom_; }
    const FnParams& fn() const noexcept { return fn_; }
    const IntegratorOptions& options() const noexcept { return opts_; }
    double v_t_neutral() const noexcept { return v_t_neutral_; }
    double v_t_min() const noexcept { return v_t_min_; }
    double v_t_max() const noexcept { return v_t_max_; }
    double range() const noexcept { return v_t_max_ - v_t_min_; }

    /// Same physics with a different V_T window (e.g. wide open for range
    /// measurements that must not saturate at the window edge).
    CtfDevice with_window(double v_t_min, double v_t_max) const;

    double vt_from_charge(double q) const noexcept;
    double charge_from_vt(double v_t) const noexcept;
    TrapState state_at(double v_t) const;

    /// dq/dt = J through the blocking oxide minus J through the tunnel oxide.
    double charge_rate(double q, double v_g) const noexcept;
    /// dv_t/dt at fixed gate voltage, the quantity integrated per pulse.
    double vt_rate(double v_t, double v_g) const noexcept;
    /// Magnitude of the tunnel-oxide current (A) at the given bias and charge.
    double gate_current(double v_g, double q) const noexcept;

    /// Continuous integration of the trap charge for `duration` seconds at a
    /// constant gate voltage, without any window clamp. Returns the new charge.
    double evolve_charge(double q0, double v_g, double duration) const;

    /// One pulse; the result is clamped to the window (flagged in `clamped`).
    TrapState apply_pulse(const TrapState& s, double v_g, double t_p) const;
    /// Stepwise-constant drive applied segment by segment, clamping after each.
    TrapState apply_segments(const TrapState& s, std::span<const Segment> segs) const;

    /// v_t after each of `pulse.n_pulses` identical pulses (length n + 1).
    std::vector<double> vt_trajectory(const TrapState& s0, const PulseSpec& pulse) const;

    /// Repeats the pulse until v_t reaches the far edge of the window. Throws
    /// DomainError if it does not within max_pulses.
    std::vector<double> traverse(double v_g, double t_p, std::size_t max_pulses) const;

private:
    void check_state(const TrapState& s) const;

    StackGeometry geom_{};
    FnParams fn_{};
    double v_t_neutral_ = 1.4786733758475081;
    double v_t_min_ = -1.3;
    double v_t_max_ = -0.3;
    IntegratorOptions opts_{};
    double inv_g_ = 0.0; // cached inverse gate capacitance
};

/// Device with the calibrated default constants and the [-1.3, -0.3] V window.
CtfDevice default_device();

} // namespace ctfsyn::device
