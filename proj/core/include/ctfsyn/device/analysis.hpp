#pragma once

#include "ctfsyn/device/trap.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ctfsyn::device {

/// Linear-region conductance G = K·(V_GS − V_T) with the read gate voltage
/// pinned at the top of the window, so G(v_t_max) = 0.
struct ConductanceMap {
    double k = 1e-6; // S/V
    double v_t_min = -1.3;
    double v_t_max = -0.3;

    double v_gs_read() const noexcept { return v_t_max; }
    double range() const noexcept { return v_t_max - v_t_min; }
};

struct Conductance {
    double g;      // S
    double g_norm; // (v_t_max - v_t) / range
};

Conductance conductance(const ConductanceMap& map, double v_t);

/// Least-squares line through (v_g, range) points extrapolated to zero range.
double extract_write_threshold(std::span<const std::pair<double, double>> points);

struct LevelStats {
    std::size_t n_levels; // pulses needed to cross the window
    double rate;          // largest single-pulse |ΔḠ|
};

/// The trajectory must start on one window edge and reach the other.
LevelStats levels_and_learning_rate(std::span<const double> traj, const ConductanceMap& map);

struct ElectronStats {
    double n;  // electrons, rounded to an integer count
    double cv; // 1/sqrt(n)
};

/// feature_size in m; density in electrons/cm² per volt of V_T shift.
ElectronStats electron_statistics(double feature_size, double delta_v_t, double density_per_volt);

/// Gaussian V_T perturbation with σ = sigma_over_range·range, clamped.
TrapState inject_vt_noise(const CtfDevice& dev, const TrapState& s, double sigma_over_range, std::uint64_t seed);

/// Range(V_T) reached by n identical pulses from the window edge opposite to
/// the pulse polarity, without the window clamp, so ranges larger than the
/// window stay distinguishable. Back-to-back pulses equal one pulse of the
/// summed width, so this is a single integration over n·t_p.
double pulse_range(const CtfDevice& dev, double v_g, double t_p, std::size_t n_pulses);

} // namespace ctfsyn::device
