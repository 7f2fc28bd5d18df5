// Reference values below come from tests/oracles/device_oracle.py, a
// separate fixed-step RK4 written from the transport equations (20000 steps
// per pulse, step-halving changes them by < 1e-10 relative).

#include "ctfsyn/device/analysis.hpp"
#include "ctfsyn/device/stack.hpp"
#include "ctfsyn/device/trap.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ctfsyn::device;

namespace {

double first_pulse_dvt(const CtfDevice& dev, double v_g, double t_p)
{
    const auto s0 = dev.state_at(v_g > 0 ? dev.v_t_min() : dev.v_t_max());
    return std::abs(dev.apply_pulse(s0, v_g, t_p).v_t - s0.v_t);
}

// Classical RK4 on the library's own right-hand side, fixed step.
double rk4(const CtfDevice& dev, double q, double v_g, double t, int n)
{
    const double h = t / n;
    for (int i = 0; i < n; ++i) {
        const double k1 = dev.charge_rate(q, v_g);
        const double k2 = dev.charge_rate(q + 0.5 * h * k1, v_g);
        const double k3 = dev.charge_rate(q + 0.5 * h * k2, v_g);
        const double k4 = dev.charge_rate(q + h * k3, v_g);
        q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return q;
}

} // namespace

TEST(DividerOracle, TunnelFieldWithoutStoredCharge)
{
    // Series capacitors: E_tox·(d_tox + d_ctl·ε_tox/ε_ctl + d_box·ε_tox/ε_box) = V_G.
    const double by_hand = 12.5 / (4e-9 + 6e-9 * 3.9 / 7.5 + 12e-9 * 3.9 / 9.0);
    EXPECT_NEAR(solve_stack_fields(StackGeometry{}, 12.5, 0.0).e_tox, by_hand, 1e-6 * by_hand);
    EXPECT_NEAR(by_hand, 1.014610389610e9, 1e-3);
    const auto f = solve_stack_fields(StackGeometry{}, 12.5, 0.0);
    EXPECT_NEAR(f.e_box * 9.0, f.e_tox * 3.9, 1e-6 * f.e_tox); // equal displacement
}

TEST(FineStepOracle, FirstPulseThresholdShifts)
{
    const auto dev = default_device();
    struct Case {
        double v_g, t_p, dvt;
    };
    for (const Case c : {Case{12.5, 0.5e-3, 6.408304881527e-04}, Case{12.5, 1e-3, 1.281411313726e-03},
                         Case{-14.5, 10e-3, 1.757786104030e-03}, Case{-14.5, 20e-3, 3.512058305461e-03},
                         Case{12.5, 0.1e-3, 1.281860790816e-04}})
        EXPECT_NEAR(first_pulse_dvt(dev, c.v_g, c.t_p), c.dvt, 1e-3 * c.dvt) << c.v_g << " V, " << c.t_p << " s";
}

TEST(FineStepOracle, HalfWidthPulsesMoveLess)
{
    const auto dev = default_device();
    EXPECT_LT(first_pulse_dvt(dev, 12.5, 0.5e-3), first_pulse_dvt(dev, 12.5, 1e-3));
    EXPECT_LT(first_pulse_dvt(dev, -14.5, 10e-3), first_pulse_dvt(dev, -14.5, 20e-3));
}

TEST(FineStepOracle, WindowTraversalCounts)
{
    const auto dev = default_device();
    EXPECT_EQ(dev.traverse(12.5, 1e-3, 100000).size() - 1, 1090u);
    EXPECT_EQ(dev.traverse(-14.5, 20e-3, 100000).size() - 1, 847u);
}

TEST(DeviceInvariant, ChargeMatchesFineStepIntegration)
{
    const auto dev = default_device();
    for (double v_g : {12.5, 11.0, -14.5, -13.0})
        for (double vt : {-1.3, -0.8, -0.3})
            for (double t : {1e-3, 20e-3, 0.5}) {
                const double q0 = dev.charge_from_vt(vt);
                const double dq_lib = dev.evolve_charge(q0, v_g, t) - q0;
                // The adaptive integrator takes a handful of steps over t;
                // the reference uses a fixed 20000.
                const double dq_ref = rk4(dev, q0, v_g, t, 20000) - q0;
                EXPECT_NEAR(dq_lib, dq_ref, 1e-3 * std::abs(dq_ref)) << v_g << " V from " << vt << " for " << t;
            }
}
