#include "ctfsyn/exp/calibrate.hpp"

#include "ctfsyn/device/analysis.hpp"
#include "ctfsyn/error.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace ctfsyn::exp {

namespace {

constexpr int kParams = 6;
constexpr int kResiduals = 6;

double threshold_of(const device::CtfDevice& dev, const std::vector<double>& volts, double t_p, std::size_t n)
{
    std::vector<std::pair<double, double>> pts;
    pts.reserve(volts.size());
    for (double v : volts)
        pts.emplace_back(v, device::pulse_range(dev, v, t_p, n));
    return device::extract_write_threshold(pts);
}

double logit(double p)
{
    p = std::clamp(p, 1e-6, 1.0 - 1e-6);
    return std::log(p / (1.0 - p));
}

DeviceConfig with_params(DeviceConfig d, const double* x)
{
    d.fn.a_tox = std::exp(x[0]);
    d.fn.b_tox = std::exp(x[1]);
    d.fn.a_box = std::exp(x[2]);
    d.fn.b_box = std::exp(x[3]);
    d.geometry.charge_centroid = 1.0 / (1.0 + std::exp(-x[4]));
    d.v_t_neutral = x[5];
    return d;
}

// Back-to-back pulses equal one long pulse, so the pulse count needed to
// cross the window is the crossing time over t_p. Continuous in the
// parameters, unlike the integer count; capped at the pulse budget.
double crossing_pulses(const device::CtfDevice& dev, double v_g, double t_p, double max_pulses)
{
    const bool up = v_g > 0.0;
    const double q0 = dev.charge_from_vt(up ? dev.v_t_min() : dev.v_t_max());
    const double goal = up ? dev.v_t_max() : dev.v_t_min();
    auto progress = [&](double t) {
        const double vt = dev.vt_from_charge(dev.evolve_charge(q0, v_g, t));
        return up ? vt - goal : goal - vt;
    };
    double hi = max_pulses * t_p;
    if (progress(hi) < 0.0)
        return max_pulses;
    double lo = 0.0;
    for (int i = 0; i < 60 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (progress(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi / t_p;
}

double current_at(const device::CtfDevice& dev, double v_g, double v_t)
{
    return dev.gate_current(v_g, dev.charge_from_vt(v_t));
}

struct Residual {
    const ExperimentConfig* cfg;

    bool operator()(const double* x, double* r) const
    {
        const auto& t = cfg->calibrate;
        const auto& p = cfg->pulse;
        try {
            const auto dev = with_params(cfg->device, x).build();
            const double budget = static_cast<double>(p.max_pulses);
            const double pulse_scale = std::log1p(t.pulses_tol / t.target_pulses);
            r[0] = std::log(crossing_pulses(dev, p.program_v, p.program_t_p, budget) / t.target_pulses) / pulse_scale;
            r[1] = std::log(crossing_pulses(dev, p.erase_v, p.erase_t_p, budget) / t.target_pulses) / pulse_scale;
            r[2] = (threshold_of(dev, cfg->thresholds.program_v, p.program_t_p, cfg->thresholds.n_pulses) -
                    t.target_program_threshold) / t.threshold_tol;
            r[3] = (threshold_of(dev, cfg->thresholds.erase_v, p.erase_t_p, cfg->thresholds.n_pulses) -
                    t.target_erase_threshold) / t.threshold_tol;
            const double log_factor = std::log(t.current_factor);
            r[4] = std::log(current_at(dev, p.program_v, cfg->gate.v_t) / t.target_program_i) / log_factor;
            r[5] = std::log(current_at(dev, p.erase_v, cfg->gate.v_t) / t.target_erase_i) / log_factor;
        } catch (const Error&) {
            return false;
        }
        for (int i = 0; i < kResiduals; ++i)
            if (!std::isfinite(r[i]))
                return false;
        return true;
    }
};

} // namespace

DeviceMetrics measure_device(const device::CtfDevice& dev, const ExperimentConfig& cfg)
{
    const auto& p = cfg.pulse;
    DeviceMetrics m;
    auto count = [&](double v_g, double t_p) {
        try {
            return static_cast<double>(dev.traverse(v_g, t_p, p.max_pulses).size() - 1);
        } catch (const DomainError&) {
            return std::nan("");
        }
    };
    m.program_pulses = count(p.program_v, p.program_t_p);
    m.erase_pulses = count(p.erase_v, p.erase_t_p);
    m.program_threshold = threshold_of(dev, cfg.thresholds.program_v, p.program_t_p, cfg.thresholds.n_pulses);
    m.erase_threshold = threshold_of(dev, cfg.thresholds.erase_v, p.erase_t_p, cfg.thresholds.n_pulses);
    m.program_current = current_at(dev, p.program_v, cfg.gate.v_t);
    m.erase_current = current_at(dev, p.erase_v, cfg.gate.v_t);
    return m;
}

std::vector<CalibrationRow> calibration_rows(const DeviceMetrics& m, const CalibrateConfig& t)
{
    auto row = [](std::string name, double value, double target, double lo, double hi) {
        return CalibrationRow{std::move(name), value, target, lo, hi, value >= lo && value <= hi};
    };
    const double pl = t.target_pulses - t.pulses_tol, ph = t.target_pulses + t.pulses_tol;
    return {
        row("program_pulses", m.program_pulses, t.target_pulses, pl, ph),
        row("erase_pulses", m.erase_pulses, t.target_pulses, pl, ph),
        row("program_threshold_v", m.program_threshold, t.target_program_threshold,
            t.target_program_threshold - t.threshold_tol, t.target_program_threshold + t.threshold_tol),
        row("erase_threshold_v", m.erase_threshold, t.target_erase_threshold,
            t.target_erase_threshold - t.threshold_tol, t.target_erase_threshold + t.threshold_tol),
        row("program_current_a", m.program_current, t.target_program_i, t.target_program_i / t.current_factor,
            t.target_program_i * t.current_factor),
        row("erase_current_a", m.erase_current, t.target_erase_i, t.target_erase_i / t.current_factor,
            t.target_erase_i * t.current_factor),
    };
}

CalibrationReport calibrate(const ExperimentConfig& cfg)
{
    const auto& d = cfg.device;
    std::array<double, kParams> x{std::log(d.fn.a_tox), std::log(d.fn.b_tox), std::log(d.fn.a_box),
                                  std::log(d.fn.b_box), logit(d.geometry.charge_centroid), d.v_t_neutral};
    const std::array<double, kParams> x0 = x;

    ceres::Problem problem;
    ceres::NumericDiffOptions nd;
    nd.relative_step_size = 1e-5;
    problem.AddResidualBlock(
        new ceres::NumericDiffCostFunction<Residual, ceres::CENTRAL, kResiduals, kParams>(
            new Residual{&cfg}, ceres::TAKE_OWNERSHIP, kResiduals, nd),
        nullptr, x.data());
    for (int i = 0; i < 4; ++i) {
        problem.SetParameterLowerBound(x.data(), i, x0[i] - 5.0);
        problem.SetParameterUpperBound(x.data(), i, x0[i] + 5.0);
    }
    // The centroid travels through a logistic map, so it needs no bounds and
    // finite differences never step outside the trap layer.
    problem.SetParameterLowerBound(x.data(), 5, x0[5] - 5.0);
    problem.SetParameterUpperBound(x.data(), 5, x0[5] + 5.0);

    ceres::Solver::Options so;
    so.trust_region_strategy_type = ceres::LEVENBERG_MARQUARDT;
    so.linear_solver_type = ceres::DENSE_QR;
    so.max_num_iterations = cfg.calibrate.max_iterations;
    so.num_threads = 1;
    so.logging_type = ceres::SILENT;
    ceres::Solver::Summary summary;
    ceres::Solve(so, &problem, &summary);
    if (!summary.IsSolutionUsable())
        throw NumericError("calibration solver failed: " + summary.message, summary.final_cost);

    CalibrationReport rep;
    rep.device = with_params(cfg.device, x.data());
    rep.metrics = measure_device(rep.device.build(), cfg);
    rep.rows = calibration_rows(rep.metrics, cfg.calibrate);
    rep.initial_rows = calibration_rows(measure_device(cfg.device.build(), cfg), cfg.calibrate);
    rep.iterations = static_cast<int>(summary.iterations.size());
    rep.final_cost = summary.final_cost;
    rep.converged = true;
    for (const auto& r : rep.rows)
        rep.converged = rep.converged && r.ok;
    return rep;
}

} // namespace ctfsyn::exp
