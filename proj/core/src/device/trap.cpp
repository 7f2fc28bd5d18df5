#include "ctfsyn/device/trap.hpp"

#include "ctfsyn/error.hpp"

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ctfsyn::device {

namespace odeint = boost::numeric::odeint;

CtfDevice::CtfDevice() : CtfDevice(StackGeometry{}, FnParams{}, 1.4786733758475081, -1.3, -0.3) {}

CtfDevice::CtfDevice(StackGeometry geom, FnParams fn, double v_t_neutral, double v_t_min, double v_t_max,
                     IntegratorOptions opts)
    : geom_(geom), fn_(fn), v_t_neutral_(v_t_neutral), v_t_min_(v_t_min), v_t_max_(v_t_max), opts_(opts)
{
    geom_.validate();
    fn_.validate();
    if (!std::isfinite(v_t_neutral_))
        throw DomainError("v_t_neutral must be finite");
    if (!(v_t_min_ < v_t_max_))
        throw DomainError(fmt::format("empty V_T window [{}, {}]", v_t_min_, v_t_max_));
    if (!(opts_.rtol > 0.0) || !(opts_.atol_vt > 0.0))
        throw DomainError("integrator tolerances must be positive");
    inv_g_ = geom_.inv_cap_gate();
}

CtfDevice CtfDevice::with_window(double lo, double hi) const
{
    return CtfDevice(geom_, fn_, v_t_neutral_, lo, hi, opts_);
}

double CtfDevice::vt_from_charge(double q) const noexcept
{
    return v_t_neutral_ - q * inv_g_;
}

double CtfDevice::charge_from_vt(double v_t) const noexcept
{
    return (v_t_neutral_ - v_t) / inv_g_;
}

TrapState CtfDevice::state_at(double v_t) const
{
    if (!(v_t >= v_t_min_ && v_t <= v_t_max_))
        throw DomainError(fmt::format("v_t {} outside window [{}, {}]", v_t, v_t_min_, v_t_max_));
    return TrapState{charge_from_vt(v_t), v_t, v_t_min_, v_t_max_, false};
}

double CtfDevice::charge_rate(double q, double v_g) const noexcept
{
    const auto f = solve_stack_fields(geom_, v_g, q);
    return fn_current_density(f.e_box, fn_.a_box, fn_.b_box) - fn_current_density(f.e_tox, fn_.a_tox, fn_.b_tox);
}

double CtfDevice::vt_rate(double v_t, double v_g) const noexcept
{
    return -inv_g_ * charge_rate(charge_from_vt(v_t), v_g);
}

double CtfDevice::gate_current(double v_g, double q) const noexcept
{
    const auto f = solve_stack_fields(geom_, v_g, q);
    return std::abs(fn_current_density(f.e_tox, fn_.a_tox, fn_.b_tox)) * geom_.area;
}

double CtfDevice::evolve_charge(double q0, double v_g, double duration) const
{
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw DomainError(fmt::format("pulse width must be finite and >= 0, got {}", duration));
    if (duration == 0.0)
        return q0;

    // Integrate the increment from zero so the relative tolerance applies to
    // the change produced by this pulse, not to the accumulated charge.
    auto rhs = [this, q0, v_g](const double& dq, double& ddq, double) { ddq = charge_rate(q0 + dq, v_g); };

    const double atol_q = opts_.atol_vt / inv_g_;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<double>>(atol_q, opts_.rtol);

    double dq = 0.0;
    double t = 0.0;
    double dt = duration;
    std::size_t steps = 0;
    while (t < duration) {
        if (t + dt > duration)
            dt = duration - t;
        const double t_before = t;
        const auto res = stepper.try_step(rhs, dq, t, dt);
        if (res == odeint::fail) {
            if (dt < opts_.min_step)
                throw NumericError(fmt::format("step size underflow at t={} s of a {} s pulse (v_g={} V)", t,
                                               duration, v_g),
                                   dt);
            continue;
        }
        if (++steps > opts_.max_steps)
            throw NumericError(fmt::format("step budget exhausted at t={} s (v_g={} V)", t, v_g), dt);
        if (!std::isfinite(dq))
            throw NumericError("trap charge became non-finite");
        // The last step is truncated to land on `duration`; guard against a
        // stagnating clock when duration - t is below the time resolution.
        if (t == t_before)
            break;
    }
    return q0 + dq;
}

TrapState CtfDevice::apply_pulse(const TrapState& s, double v_g, double t_p) const
{
    check_state(s);
    if (!std::isfinite(v_g))
        throw DomainError("gate voltage must be finite");
    if (t_p == 0.0)
        return s;
    const double q = evolve_charge(s.q_trap, v_g, t_p);
    TrapState out{q, vt_from_charge(q), v_t_min_, v_t_max_, false};
    if (out.v_t > v_t_max_ || out.v_t < v_t_min_) {
        out.v_t = std::clamp(out.v_t, v_t_min_, v_t_max_);
        out.q_trap = charge_from_vt(out.v_t);
        out.clamped = true;
    }
    return out;
}

TrapState CtfDevice::apply_segments(const TrapState& s, std::span<const Segment> segs) const
{
    TrapState cur = s;
    bool any_clamp = false;
    for (const auto& seg : segs) {
        cur = apply_pulse(cur, seg.v_g, seg.duration);
        any_clamp = any_clamp || cur.clamped;
    }
    cur.clamped = any_clamp;
    return cur;
}

std::vector<double> CtfDevice::vt_trajectory(const TrapState& s0, const PulseSpec& pulse) const
{
    if (!(pulse.t_p >= 0.0))
        throw DomainError("pulse width must be >= 0");
    std::vector<double> out;
    out.reserve(pulse.n_pulses + 1);
    out.push_back(s0.v_t);
    TrapState cur = s0;
    for (std::size_t i = 0; i < pulse.n_pulses; ++i) {
        cur = apply_pulse(cur, pulse.v_g, pulse.t_p);
        out.push_back(cur.v_t);
    }
    return out;
}

std::vector<double> CtfDevice::traverse(double v_g, double t_p, std::size_t max_pulses) const
{
    if (v_g == 0.0 || !(t_p > 0.0))
        throw DomainError("traversal needs a non-zero gate voltage and a positive pulse width");
    const bool up = v_g > 0.0;
    TrapState cur = state_at(up ? v_t_min_ : v_t_max_);
    const double target = up ? v_t_max_ : v_t_min_;
    std::vector<double> out{cur.v_t};
    for (std::size_t i = 0; i < max_pulses; ++i) {
        cur = apply_pulse(cur, v_g, t_p);
        out.push_back(cur.v_t);
        if (cur.v_t == target)
            return out;
    }
    throw DomainError(fmt::format("({} V, {} s) did not traverse the window within {} pulses", v_g, t_p,
                                  max_pulses));
}

void CtfDevice::check_state(const TrapState& s) const
{
    if (!std::isfinite(s.q_trap) || !std::isfinite(s.v_t))
        throw DomainError("trap state is not finite");
}

CtfDevice default_device()
{
    return CtfDevice{};
}

} // namespace ctfsyn::device
