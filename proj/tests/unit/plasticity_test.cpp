#include "ctfsyn/device/trap.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/plasticity/fit.hpp"
#include "ctfsyn/plasticity/model.hpp"
#include "ctfsyn/rng.hpp"
#include "ctfsyn/waveform/stdp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ctfsyn;
using namespace ctfsyn::plasticity;

namespace {

const std::vector<double> kG{0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0};
const std::vector<double> kDt{-3.0, -1.5, -0.8, -0.3, -0.05, 0.0, 0.05, 0.3, 0.8, 1.5, 3.0};

void expect_params_near(const PlasticityParams& got, const PlasticityParams& want, double rel)
{
    EXPECT_NEAR(got.dg_max_ltp, want.dg_max_ltp, rel * std::abs(want.dg_max_ltp));
    EXPECT_NEAR(got.dg_max_ltd, want.dg_max_ltd, rel * std::abs(want.dg_max_ltd));
    EXPECT_NEAR(got.tau_ltp, want.tau_ltp, rel * want.tau_ltp);
    EXPECT_NEAR(got.tau_ltd, want.tau_ltd, rel * want.tau_ltd);
    EXPECT_NEAR(got.a1, want.a1, rel * want.a1);
    EXPECT_NEAR(got.a2, want.a2, rel * want.a2);
}

} // namespace

TEST(DeltaG, EndpointsAtCoincidence)
{
    const PlasticityParams p{};
    EXPECT_DOUBLE_EQ(delta_g(p, p.g_min, 0.0, Branch::ltp), 0.07);
    EXPECT_DOUBLE_EQ(delta_g(p, p.g_max, 0.0, Branch::ltd), -0.14);
    EXPECT_NEAR(delta_g(p, 1.0, 0.0, Branch::ltp), 2.348e-5, 1e-8);
    EXPECT_THROW((void)delta_g(p, 1.2, 0.0, Branch::ltp), DomainError);
}

TEST(DeltaG, WeakensWithSeparationOnBothBranches)
{
    const PlasticityParams p{};
    for (double g : {0.2, 0.5, 0.8}) {
        EXPECT_GT(delta_g(p, g, 0.1, Branch::ltp), delta_g(p, g, 0.5, Branch::ltp));
        EXPECT_LT(delta_g(p, g, -0.1, Branch::ltd), delta_g(p, g, -0.5, Branch::ltd));
        EXPECT_GT(delta_g(p, g, 0.3, Branch::ltp), 0.0);
        EXPECT_LT(delta_g(p, g, -0.3, Branch::ltd), 0.0);
    }
}

TEST(DeltaG, PotentiationShrinksAndDepressionGrowsWithWeight)
{
    const PlasticityParams p{};
    for (double g = 0.0; g < 0.95; g += 0.1) {
        EXPECT_GT(delta_g(p, g, 0.2, Branch::ltp), delta_g(p, g + 0.1, 0.2, Branch::ltp));
        EXPECT_GT(std::abs(delta_g(p, g + 0.1, -0.2, Branch::ltd)), std::abs(delta_g(p, g, -0.2, Branch::ltd)));
    }
}

TEST(PlasticityInvariant, SoftBoundsReachFixedPoints)
{
    const PlasticityParams p{};
    for (double g0 : {0.0, 0.37, 0.9}) {
        double up = g0, down = g0;
        for (int i = 0; i < 200000; ++i) {
            up = apply_update(p, up, 0.0);
            down = apply_update(p, down, -1e-9);
        }
        EXPECT_LE(up, p.g_max);
        EXPECT_EQ(apply_update(p, up, 0.0), up);
        EXPECT_GE(down, p.g_min);
        EXPECT_EQ(apply_update(p, down, -1e-9), down);
    }
}

TEST(Vpeak, NormalizesPerBranch)
{
    const std::vector<double> ltp{-11.5, -13.0, -14.5};
    const auto n = vpeak_normalize(ltp);
    EXPECT_DOUBLE_EQ(n[0], 0.0);
    EXPECT_DOUBLE_EQ(n[1], -0.5);
    EXPECT_DOUBLE_EQ(n[2], -1.0);
    const PlasticityParams p{};
    EXPECT_EQ(dt_from_vpeak(p, 0.0, Branch::ltp), 0.0);
    EXPECT_DOUBLE_EQ(dt_from_vpeak(p, -1.0, Branch::ltp), 1.05);
    EXPECT_DOUBLE_EQ(dt_from_vpeak(p, -0.5, Branch::ltd), -0.62);
}

TEST(Fit, RecoversGeneratingParametersWithoutNoise)
{
    const PlasticityParams truth{};
    const auto samples = generate_samples(truth, kG, kDt);
    const auto r = fit(samples);
    expect_params_near(r.params, truth, 0.01);
    EXPECT_LT(r.rmse, 1e-8);
}

TEST(Fit, ToleratesOnePercentNoise)
{
    const PlasticityParams truth{};
    auto samples = generate_samples(truth, kG, kDt);
    Rng rng(derive_seed(3, "fit-noise", 0));
    std::normal_distribution<double> n(0.0, 0.01);
    for (auto& s : samples)
        s.dg_observed *= 1.0 + n(rng);
    expect_params_near(fit(samples).params, truth, 0.10);
}

TEST(Fit, SameSeedSameResult)
{
    const auto samples = generate_samples(PlasticityParams{}, kG, kDt);
    FitOptions o;
    o.starts = 4;
    const auto a = fit(samples, o);
    const auto b = fit(samples, o);
    EXPECT_EQ(a.params.a1, b.params.a1);
    EXPECT_EQ(a.best_start, b.best_start);
}

TEST(Fit, DeviceGeneratedCurveIsFitWithinRmseBound)
{
    const auto dev = device::default_device();
    const waveform::StdpSetup setup{};
    std::vector<PlasticitySample> samples;
    for (double g : {0.1, 0.5, 0.9})
        for (double dt : waveform::symmetric_grid(0.03, 21)) {
            if (dt == 0.0)
                continue;
            const auto pt = waveform::stdp_point(dev, setup, dt, g);
            samples.push_back({g, dt, pt.dg_norm});
        }
    FitOptions o;
    o.starts = 4;
    EXPECT_LE(fit(samples, o).rmse, 0.01);
}
