#include "ctfsyn/circuit/cell.hpp"
#include "ctfsyn/circuit/devices.hpp"
#include "ctfsyn/circuit/energy.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/waveform/waveform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

using namespace ctfsyn;
using namespace ctfsyn::circuit;

TEST(Topology, NamesRoundTrip)
{
    const auto all = all_topologies();
    ASSERT_EQ(all.size(), 4u);
    EXPECT_EQ(all.front().name(), "1F0D-bulk");
    EXPECT_EQ(all.back().name(), "1F2D-soi");
    for (const auto& t : all)
        EXPECT_EQ(CellTopology::parse(t.name()).name(), t.name());
    EXPECT_THROW((void)CellTopology::parse("1F1D-soi"), DomainError);
}

TEST(Diode, ZenerBreaksDownBeyondSixVolts)
{
    const auto zd = zener_diode();
    EXPECT_GT(std::abs(diode_current(zd, -7.0)), 1e3 * std::abs(diode_current(zd, -5.0)));
}

TEST(Diode, DerivativeMatchesFiniteDifference)
{
    // Only where the current actually moves: in reverse saturation the
    // difference quotient is lost to rounding.
    const std::vector<std::pair<DiodeModel, std::vector<long double>>> cases{
        {standard_diode(), {0.3L, 0.6L, 0.8L}}, {zener_diode(), {-6.5L, -6.0L, 0.3L, 0.6L}}};
    for (const auto& [d, volts] : cases) {
        for (long double v : volts) {
            const long double h = 1e-7L;
            const long double fd = (diode_eval(d, v + h).i - diode_eval(d, v - h).i) / (2 * h);
            EXPECT_NEAR(static_cast<double>(diode_eval(d, v).g / fd), 1.0, 1e-5) << "v=" << static_cast<double>(v);
        }
    }
}

TEST(Diode, ExponentClampKeepsLargeBiasFinite)
{
    const double i = diode_current(standard_diode(), 50.0);
    EXPECT_TRUE(std::isfinite(i));
    EXPECT_GT(i, diode_current(standard_diode(), 10.0));
}

TEST(Diode, RejectsPositiveBreakdown)
{
    DiodeModel d = zener_diode();
    d.v_bv = 3.0;
    EXPECT_THROW(d.validate(), DomainError);
}

TEST(CircuitInvariant, RectifierBlocksInsideWindowAndConductsBelowBreakdown)
{
    const CellModels m{};
    const double v_bv = *m.zd.v_bv;
    for (double v = v_bv + 0.2 + 1e-3; v < 0.4; v += 0.05)
        EXPECT_LT(std::abs(two_diode_current(m, v).i), 1e-12) << "v=" << v;
    // Positive bias reverse-biases the standard diode, so only the negative
    // side conducts.
    for (double v : {v_bv - 0.5, v_bv - 1.0, -8.0})
        EXPECT_GT(std::abs(two_diode_current(m, v).i), 1e-9) << "v=" << v;
}

TEST(CircuitInvariant, SeriesElementsCarryEqualCurrent)
{
    const CellModels m{};
    for (const auto& topo : all_topologies()) {
        for (double v : {-7.5, -6.2, -3.0, 0.5, 4.0, 7.5}) {
            const auto s = dc_solve(topo, m, v, 0.0);
            const double tol = 1e-12 + 1e-9 * std::abs(s.i_d);
            EXPECT_NEAR(s.i_d, s.i_flash + s.i_body, tol) << topo.name() << " v=" << v;
            if (topo.has_2d)
                EXPECT_NEAR(s.i_flash, s.i_series, tol) << topo.name() << " v=" << v;
            if (topo.substrate == Substrate::soi)
                EXPECT_EQ(s.i_body, 0.0);
        }
    }
}

TEST(CircuitInvariant, GoldenSweepsConvergeQuickly)
{
    const CellModels m{};
    for (const auto& topo : all_topologies()) {
        const auto sweep = iv_sweep(topo, m, -8.0, 8.0, 0.01, 0.0);
        ASSERT_EQ(sweep.size(), 1601u);
        for (const auto& p : sweep) {
            ASSERT_LT(p.iterations, 50) << topo.name() << " v=" << p.v_d;
            ASSERT_LE(p.residual, 1e-12 + 1e-9 * std::abs(p.i_d)) << topo.name() << " v=" << p.v_d;
        }
    }
}

TEST(CircuitInvariant, WriteEnergyIsNonNegativeAndOrderedByTopology)
{
    const CellModels m{};
    const auto post = waveform::render(waveform::drain_template(), 1e-4);
    std::map<std::string, EnergyReport> e;
    for (const auto& topo : all_topologies()) {
        const auto r = write_energy(topo, m, post, 0.0, 1e-4, EssentialWrite{});
        EXPECT_GE(r.e_parasitic, 0.0);
        EXPECT_GE(r.e_essential, 0.0);
        EXPECT_DOUBLE_EQ(r.e_total, r.e_parasitic + r.e_essential);
        e[r.topology] = r;
    }
    EXPECT_LE(e["1F2D-soi"].e_parasitic, e["1F2D-bulk"].e_parasitic);
    EXPECT_LE(e["1F2D-bulk"].e_parasitic, e["1F0D-bulk"].e_parasitic);
}

TEST(EssentialEnergy, ScalesLinearly)
{
    EXPECT_EQ(essential_write_energy(12.5, 0.0, 1e-3, 1e6), 0.0);
    const double e = essential_write_energy(12.5, 0.47e-9, 1e-3, 1e6);
    EXPECT_NEAR(e, 5.875e-18, 1e-24);
    EXPECT_DOUBLE_EQ(essential_write_energy(12.5, 0.94e-9, 1e-3, 1e6), 2 * e);
    EXPECT_NEAR(essential_write_energy(14.5, 2.34e-9, 20e-3, 1e6), 678.6e-18, 1e-22);
}

TEST(Read, CurrentFallsAsThresholdRises)
{
    CellModels m{};
    m.flash.mode = MosfetMode::vt_dependent;
    const CellTopology cell{true, Substrate::soi};
    double prev = INFINITY;
    for (double vt : {-1.3, -0.8, -0.3}) {
        m.flash.v_t = vt;
        const double i = std::abs(dc_solve(cell, m, -7.0, 0.2).i_d);
        EXPECT_LT(i, prev) << "v_t=" << vt;
        EXPECT_GT(i, 1e-6);
        prev = i;
    }
    // Above breakdown the same cell is off.
    m.flash.v_t = -1.3;
    EXPECT_LT(std::abs(dc_solve(cell, m, -5.0, 0.2).i_d), 1e-12);
}
