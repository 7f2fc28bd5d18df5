#include "ctfsyn/device/analysis.hpp"

#include "ctfsyn/error.hpp"
#include "ctfsyn/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace ctfsyn::device {

Conductance conductance(const ConductanceMap& map, double v_t)
{
    if (!(map.k > 0.0) || !(map.range() > 0.0))
        throw DomainError("conductance map needs k > 0 and a non-empty window");
    if (!(v_t >= map.v_t_min && v_t <= map.v_t_max))
        throw DomainError(fmt::format("v_t {} outside window [{}, {}]", v_t, map.v_t_min, map.v_t_max));
    return {map.k * (map.v_gs_read() - v_t), (map.v_t_max - v_t) / map.range()};
}

double extract_write_threshold(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 2)
        throw DomainError("threshold extraction needs at least two points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        if (!(y >= 0.0))
            throw DomainError("Range(V_T) values must be non-negative");
        mx += x;
        my += y;
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0)
        throw DomainError("threshold fit is singular: all gate voltages are equal");
    const double slope = sxy / sxx;
    if (slope == 0.0)
        throw DomainError("threshold fit is singular: Range(V_T) does not vary with v_g");
    return mx - my / slope;
}

LevelStats levels_and_learning_rate(std::span<const double> traj, const ConductanceMap& map)
{
    if (traj.size() < 2)
        throw DomainError("trajectory too short");
    const double lo = map.v_t_min, hi = map.v_t_max;
    const bool up = traj.front() == lo;
    if (!up && traj.front() != hi)
        throw DomainError("trajectory does not start on a window edge");
    const double target = up ? hi : lo;
    std::size_t n = 0;
    double rate = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        rate = std::max(rate, std::abs(traj[i] - traj[i - 1]) / map.range());
        if (traj[i] == target) {
            n = i;
            break;
        }
    }
    if (n == 0)
        throw DomainError("trajectory does not reach the opposite window edge");
    return {n, rate};
}

ElectronStats electron_statistics(double feature_size, double delta_v_t, double density_per_volt)
{
    if (!(feature_size > 0.0) || !(delta_v_t > 0.0) || !(density_per_volt > 0.0))
        throw DomainError("electron statistics need positive inputs");
    const double side_cm = feature_size * 100.0;
    const double n = std::round(density_per_volt * side_cm * side_cm * delta_v_t);
    if (n < 1.0)
        throw DomainError(fmt::format("fewer than one stored electron ({:.3g}): sub-single-electron regime",
                                      density_per_volt * side_cm * side_cm * delta_v_t));
    return {n, 1.0 / std::sqrt(n)};
}

TrapState inject_vt_noise(const CtfDevice& dev, const TrapState& s, double sigma_over_range, std::uint64_t seed)
{
    if (!(sigma_over_range >= 0.0))
        throw DomainError("noise level must be >= 0");
    if (sigma_over_range == 0.0)
        return s;
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma_over_range * s.range());
    TrapState out = s;
    const double v = s.v_t + gauss(rng);
    out.v_t = std::clamp(v, s.v_t_min, s.v_t_max);
    out.clamped = out.v_t != v;
    out.q_trap = dev.charge_from_vt(out.v_t);
    return out;
}

double pulse_range(const CtfDevice& dev, double v_g, double t_p, std::size_t n_pulses)
{
    const double v0 = v_g >= 0.0 ? dev.v_t_min() : dev.v_t_max();
    const double q1 = dev.evolve_charge(dev.charge_from_vt(v0), v_g, t_p * static_cast<double>(n_pulses));
    const double v1 = dev.vt_from_charge(q1);
    return std::max(0.0, v_g >= 0.0 ? v1 - v0 : v0 - v1);
}

} // namespace ctfsyn::device
