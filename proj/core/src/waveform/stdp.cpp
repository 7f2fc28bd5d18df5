#include "ctfsyn/waveform/stdp.hpp"

#include "ctfsyn/error.hpp"
#include "ctfsyn/parallel.hpp"

#include <cmath>

namespace ctfsyn::waveform {

void StdpSetup::validate() const
{
    gate.validate();
    drain.validate();
    if (!(dt_sample > 0.0))
        throw DomainError("dt_sample must be positive");
}

std::vector<VpeakPoint> vpeak_curve(const StdpSetup& setup, std::span<const double> dt_grid)
{
    setup.validate();
    if (dt_grid.empty())
        throw DomainError("empty dt grid");
    const Waveform pre = render(setup.gate, setup.dt_sample);
    const Waveform post = render(setup.drain, setup.dt_sample);
    std::vector<VpeakPoint> out;
    out.reserve(dt_grid.size());
    for (double dt : dt_grid)
        out.push_back({dt, superpose(pre, post, dt, setup.dt_sample).branch_peak(dt)});
    return out;
}

StdpPoint stdp_point(const device::CtfDevice& dev, const StdpSetup& setup, double dt, std::optional<double> g_init)
{
    setup.validate();
    const Waveform pre = render(setup.gate, setup.dt_sample);
    const Waveform post = render(setup.drain, setup.dt_sample);
    const auto sup = superpose(pre, post, dt, setup.dt_sample);

    const double g0 = g_init.value_or(dt >= 0.0 ? 0.0 : 1.0);
    if (!(g0 >= 0.0 && g0 <= 1.0))
        throw DomainError("initial normalized conductance must lie in [0, 1]");
    const double v0 = dev.v_t_max() - g0 * dev.range();
    const auto s0 = dev.state_at(v0);
    const auto segs = to_segments(sup.trace, setup.dt_sample);
    const auto s1 = dev.apply_segments(s0, segs);
    return {dt, sup.branch_peak(dt), (s0.v_t - s1.v_t) / dev.range()};
}

std::vector<StdpPoint> stdp_curve(const device::CtfDevice& dev, const StdpSetup& setup, std::span<const double> dt_grid)
{
    setup.validate();
    if (dt_grid.empty())
        throw DomainError("empty dt grid");
    std::vector<StdpPoint> out(dt_grid.size());
    parallel_for(dt_grid.size(), [&](std::size_t i) { out[i] = stdp_point(dev, setup, dt_grid[i]); });
    return out;
}

CurveShape check_curve_shape(std::span<const StdpPoint> curve)
{
    CurveShape out;
    const StdpPoint* prev_ltd = nullptr; // walking away from dt = 0 on the left
    for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
        if (it->dt >= 0.0)
            continue;
        if (it->dg_norm > 0.0)
            out.signs_ok = false;
        if (prev_ltd && std::abs(it->dg_norm) > std::abs(prev_ltd->dg_norm))
            out.ltd_monotone = false;
        prev_ltd = &*it;
    }
    const StdpPoint* prev_ltp = nullptr;
    for (const auto& p : curve) {
        if (p.dt <= 0.0)
            continue;
        if (p.dg_norm < 0.0)
            out.signs_ok = false;
        if (prev_ltp && std::abs(p.dg_norm) > std::abs(prev_ltp->dg_norm))
            out.ltp_monotone = false;
        prev_ltp = &p;
    }
    return out;
}

std::vector<double> symmetric_grid(double dt_max, std::size_t n)
{
    if (n < 2 || !(dt_max > 0.0))
        throw DomainError("grid needs n >= 2 points and dt_max > 0");
    std::vector<double> g(n);
    const double step = 2.0 * dt_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        // Build from the centre outwards so the grid is exactly symmetric.
        const double k = static_cast<double>(i) - static_cast<double>(n - 1) / 2.0;
        g[i] = k * step;
    }
    return g;
}

} // namespace ctfsyn::waveform
