#include "ctfsyn/plasticity/fit.hpp"

#include "ctfsyn/error.hpp"
#include "ctfsyn/parallel.hpp"
#include "ctfsyn/rng.hpp"

#include <ceres/ceres.h>
#include <fmt/format.h>

#include <cmath>
#include <random>
#include <set>

namespace ctfsyn::plasticity {

namespace {

// Parameter block: log(dg_ltp), log(-dg_ltd), log(tau_ltp), log(tau_ltd), a1, a2.
constexpr int kParams = 6;

struct SampleResidual {
    PlasticitySample s;
    double g_min, g_max;

    template <class T>
    bool operator()(const T* x, T* r) const
    {
        using std::abs;
        using std::exp;
        const double span = g_max - g_min;
        T model;
        if (s.dt >= 0.0)
            model = exp(x[0]) * exp(-abs(s.dt) / exp(x[2])) * exp(-x[4] * ((s.g_i - g_min) / span));
        else
            model = -exp(x[1]) * exp(-abs(s.dt) / exp(x[3])) * exp(-x[5] * ((g_max - s.g_i) / span));
        r[0] = model - s.dg_observed;
        return true;
    }
};

PlasticityParams unpack(const std::array<double, kParams>& x, double g_min, double g_max)
{
    PlasticityParams p;
    p.g_min = g_min;
    p.g_max = g_max;
    p.dg_max_ltp = std::exp(x[0]);
    p.dg_max_ltd = -std::exp(x[1]);
    p.tau_ltp = std::exp(x[2]);
    p.tau_ltd = std::exp(x[3]);
    p.a1 = x[4];
    p.a2 = x[5];
    return p;
}

void check_design(std::span<const PlasticitySample> samples, const FitOptions& opts)
{
    if (samples.size() < 8)
        throw DomainError(fmt::format("fit needs at least 8 samples, got {}", samples.size()));
    std::set<double> g_all, g_ltp, g_ltd, dt_ltp, dt_ltd;
    for (const auto& s : samples) {
        if (!(s.g_i >= opts.g_min && s.g_i <= opts.g_max) || !std::isfinite(s.dt) || !std::isfinite(s.dg_observed))
            throw DomainError("fit sample outside bounds or not finite");
        g_all.insert(s.g_i);
        (s.dt >= 0.0 ? g_ltp : g_ltd).insert(s.g_i);
        (s.dt >= 0.0 ? dt_ltp : dt_ltd).insert(s.dt);
    }
    if (g_all.size() < 3)
        throw DomainError("fit needs at least three distinct g_i values");
    // Each branch has an amplitude, a time constant and a weight exponent;
    // without two distinct values of g_i and dt on a branch the Jacobian loses rank.
    if (g_ltp.size() < 2 || g_ltd.size() < 2 || dt_ltp.size() < 2 || dt_ltd.size() < 2)
        throw DomainError("degenerate design: each branch needs two distinct g_i and two distinct dt values");
}

} // namespace

double rmse(const PlasticityParams& p, std::span<const PlasticitySample> samples)
{
    if (samples.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto& s : samples) {
        const double r = delta_g(p, s.g_i, s.dt, branch_of(s.dt)) - s.dg_observed;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(samples.size()));
}

FitResult fit(std::span<const PlasticitySample> samples, const FitOptions& opts)
{
    if (opts.starts < 1)
        throw DomainError("fit needs at least one start");
    if (!(opts.g_max > opts.g_min))
        throw DomainError("g_max must exceed g_min");
    check_design(samples, opts);

    struct StartResult {
        std::array<double, kParams> x;
        double cost;
    };
    std::vector<StartResult> results(static_cast<std::size_t>(opts.starts));

    // Draw all starting points up front so they do not depend on scheduling.
    std::vector<std::array<double, kParams>> starts(results.size());
    Rng rng(derive_seed(opts.seed, "plasticity-fit", 0));
    std::uniform_real_distribution<double> log_amp(std::log(1e-5), std::log(0.5));
    std::uniform_real_distribution<double> log_tau(std::log(1e-3), std::log(10.0));
    std::uniform_real_distribution<double> expo(0.0, 15.0);
    for (auto& x : starts)
        x = {log_amp(rng), log_amp(rng), log_tau(rng), log_tau(rng), expo(rng), expo(rng)};

    parallel_for(results.size(), [&](std::size_t k) {
        std::array<double, kParams> x = starts[k];
        ceres::Problem::Options popts;
        ceres::Problem problem(popts);
        for (const auto& s : samples)
            problem.AddResidualBlock(new ceres::AutoDiffCostFunction<SampleResidual, 1, kParams>(
                                         new SampleResidual{s, opts.g_min, opts.g_max}),
                                     nullptr, x.data());
        for (int i = 0; i < 4; ++i) {
            problem.SetParameterLowerBound(x.data(), i, std::log(1e-12));
            problem.SetParameterUpperBound(x.data(), i, std::log(1e3));
        }
        for (int i = 4; i < 6; ++i) {
            problem.SetParameterLowerBound(x.data(), i, 0.0);
            problem.SetParameterUpperBound(x.data(), i, 60.0);
        }
        ceres::Solver::Options so;
        so.minimizer_type = ceres::TRUST_REGION;
        so.trust_region_strategy_type = ceres::LEVENBERG_MARQUARDT;
        so.linear_solver_type = ceres::DENSE_QR;
        so.max_num_iterations = opts.max_iterations;
        so.function_tolerance = 1e-16;
        so.gradient_tolerance = 1e-20;
        so.parameter_tolerance = 1e-14;
        so.num_threads = 1;
        so.logging_type = ceres::SILENT;
        ceres::Solver::Summary summary;
        ceres::Solve(so, &problem, &summary);
        results[k] = {x, std::isfinite(summary.final_cost) ? summary.final_cost : HUGE_VAL};
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < results.size(); ++k)
        if (results[k].cost < results[best].cost)
            best = k;
    if (!std::isfinite(results[best].cost))
        throw NumericError("all fit starts diverged");

    FitResult out;
    out.params = unpack(results[best].x, opts.g_min, opts.g_max);
    out.rmse = rmse(out.params, samples);
    out.best_start = static_cast<int>(best);
    return out;
}

std::vector<PlasticitySample> generate_samples(const PlasticityParams& p, std::span<const double> g_grid,
                                               std::span<const double> dt_grid)
{
    p.validate();
    std::vector<PlasticitySample> out;
    out.reserve(g_grid.size() * dt_grid.size());
    for (double g : g_grid)
        for (double dt : dt_grid)
            out.push_back({g, dt, delta_g(p, g, dt, branch_of(dt))});
    return out;
}

} // namespace ctfsyn::plasticity
