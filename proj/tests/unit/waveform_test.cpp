#include "ctfsyn/device/analysis.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/waveform/stdp.hpp"
#include "ctfsyn/waveform/waveform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace ctfsyn;
using namespace ctfsyn::waveform;

namespace {

double threshold_for(const device::CtfDevice& dev, const std::vector<double>& volts, double t_p)
{
    std::vector<std::pair<double, double>> pts;
    for (double v : volts)
        pts.emplace_back(v, device::pulse_range(dev, v, t_p, 1000));
    return device::extract_write_threshold(pts);
}

} // namespace

TEST(Template, RendersSpikeThenLinearTail)
{
    const auto w = render(gate_template(), 1e-4);
    EXPECT_DOUBLE_EQ(w.max(), 9.8);
    EXPECT_DOUBLE_EQ(w.min(), -3.0);
    EXPECT_NEAR(w.duration(), 21e-3, 1e-12);
    EXPECT_DOUBLE_EQ(w.at(0.5e-3), 9.8);
    EXPECT_NEAR(w.at(1e-3 + 10e-3), -1.5, 1e-9); // halfway down the tail
    EXPECT_EQ(w.at(1.0), 0.0);
}

TEST(Template, RejectsSamePolarityPeaks)
{
    WaveformTemplate t = gate_template();
    t.v_neg = 1.0;
    EXPECT_THROW(t.validate(), DomainError);
    EXPECT_THROW((void)render(gate_template(), 1.0), DomainError);
    EXPECT_THROW((void)parse_shape("square"), DomainError);
}

TEST(Waveform, RejectsNonIncreasingBreakpoints)
{
    EXPECT_THROW(Waveform({{0.0, 1.0}, {0.0, 2.0}}), DomainError);
}

TEST(Superpose, ZeroPostLeavesPreUnchanged)
{
    const double ds = 1e-4;
    const auto pre = render(gate_template(), ds);
    const auto sup = superpose(pre, zeros(0.0, ds, 50), 2e-3, ds);
    for (const auto& s : pre.samples())
        EXPECT_NEAR(sup.trace.at(s.t), s.v, 1e-12) << "t=" << s.t;
}

TEST(Superpose, PeaksJustBeforeAndAfterCoincidence)
{
    const StdpSetup setup{};
    const std::vector<double> grid{-setup.dt_sample, setup.dt_sample};
    const auto vp = vpeak_curve(setup, grid);
    EXPECT_DOUBLE_EQ(vp[0].v_peak, 12.5);
    EXPECT_DOUBLE_EQ(vp[1].v_peak, -14.5);
}

TEST(Superpose, PeakConvergesUnderGridRefinement)
{
    StdpSetup coarse{};
    StdpSetup fine{};
    fine.dt_sample = coarse.dt_sample / 10.0;
    const auto grid = symmetric_grid(0.03, 41);
    const auto a = vpeak_curve(coarse, grid);
    const auto b = vpeak_curve(fine, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(a[i].v_peak, b[i].v_peak, 0.01 * std::abs(b[i].v_peak)) << "dt=" << grid[i];
}

TEST(Segments, MergesEqualNeighboursAndKeepsDuration)
{
    const double ds = 1e-4;
    const auto w = render(gate_template(), ds);
    const auto segs = to_segments(w, ds);
    double total = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        total += segs[i].duration;
        if (i > 0)
            EXPECT_NE(segs[i].v_g, segs[i - 1].v_g);
    }
    EXPECT_NEAR(total, static_cast<double>(w.samples().size()) * ds, 1e-12);
    EXPECT_LT(segs.size(), w.samples().size());
}

TEST(Grid, SymmetricAndEvenlySpaced)
{
    const auto g = symmetric_grid(0.03, 41);
    ASSERT_EQ(g.size(), 41u);
    EXPECT_DOUBLE_EQ(g.front(), -0.03);
    EXPECT_DOUBLE_EQ(g.back(), 0.03);
    EXPECT_NEAR(g[20], 0.0, 1e-15);
    EXPECT_THROW((void)symmetric_grid(0.03, 1), DomainError);
}

TEST(CurveShape, FlagsWrongSignAndGrowingTail)
{
    std::vector<StdpPoint> c{{-0.02, 10, -0.1}, {-0.01, 12, -0.2}, {0.01, -14, 0.2}, {0.02, -12, 0.1}};
    EXPECT_TRUE(check_curve_shape(c).ok());
    c[3].dg_norm = 0.3;
    EXPECT_FALSE(check_curve_shape(c).ltp_monotone);
    c[3].dg_norm = -0.01;
    EXPECT_FALSE(check_curve_shape(c).signs_ok);
}

class StdpInvariant : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        const auto dev = device::default_device();
        curve_ = stdp_curve(dev, StdpSetup{}, symmetric_grid(0.03, 41));
    }
    static inline std::vector<StdpPoint> curve_;
};

TEST_F(StdpInvariant, SignPatternAndBranchMonotonicity)
{
    const auto shape = check_curve_shape(curve_);
    EXPECT_TRUE(shape.signs_ok);
    EXPECT_TRUE(shape.ltd_monotone);
    EXPECT_TRUE(shape.ltp_monotone);
    for (const auto& p : curve_)
        EXPECT_GE(p.dg_norm * (p.dt >= 0 ? 1.0 : -1.0), -1e-15) << "dt=" << p.dt;
}

TEST_F(StdpInvariant, SubThresholdOffsetsLeaveConductanceUnchanged)
{
    const auto dev = device::default_device();
    const double program = threshold_for(dev, {10.5, 11.0, 11.5, 12.0, 12.5}, 1e-3);
    const double erase = threshold_for(dev, {-12.5, -13.0, -13.5, -14.0, -14.5}, 20e-3);
    for (const auto& p : curve_) {
        const double thr = p.v_peak >= 0.0 ? program : erase;
        if (std::abs(p.v_peak) < std::abs(thr))
            EXPECT_LT(std::abs(p.dg_norm), 1e-6) << "dt=" << p.dt << " v_peak=" << p.v_peak << " threshold=" << thr;
    }
}
