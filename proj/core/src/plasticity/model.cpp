#include "ctfsyn/plasticity/model.hpp"

#include "ctfsyn/error.hpp"

#include <algorithm>
#include <cmath>

namespace ctfsyn::plasticity {

void PlasticityParams::validate() const
{
    if (!(g_max > g_min))
        throw DomainError("g_max must exceed g_min");
    if (!(dg_max_ltp > 0.0) || !(dg_max_ltd < 0.0))
        throw DomainError("dg_max_ltp must be > 0 and dg_max_ltd < 0");
    if (!(tau_ltp > 0.0) || !(tau_ltd > 0.0))
        throw DomainError("time constants must be positive");
    if (!(a1 >= 0.0) || !(a2 >= 0.0))
        throw DomainError("weight-dependence exponents must be >= 0");
}

std::vector<double> vpeak_normalize(std::span<const double> v_peaks)
{
    if (v_peaks.empty())
        throw DomainError("no peaks to normalize");
    const auto [lo, hi] = std::minmax_element(v_peaks.begin(), v_peaks.end());
    const double span = *hi - *lo;
    if (!(span > 0.0))
        throw DomainError("constant V_peak input cannot be normalized");
    std::vector<double> out;
    out.reserve(v_peaks.size());
    for (double v : v_peaks)
        out.push_back((v - *hi) / span);
    return out;
}

double dt_from_vpeak(const PlasticityParams& p, double v_norm, Branch branch)
{
    if (!(v_norm >= -1.0 && v_norm <= 0.0))
        throw DomainError("normalized V_peak must lie in [-1, 0]");
    return branch == Branch::ltp ? -p.tau_ltp * v_norm : p.tau_ltd * v_norm;
}

double delta_g(const PlasticityParams& p, double g_i, double dt, Branch branch)
{
    if (!(g_i >= p.g_min && g_i <= p.g_max))
        throw DomainError("g_i outside [g_min, g_max]");
    const double span = p.g_max - p.g_min;
    if (branch == Branch::ltp)
        return p.dg_max_ltp * std::exp(-std::abs(dt) / p.tau_ltp) * std::exp(-p.a1 * (g_i - p.g_min) / span);
    return p.dg_max_ltd * std::exp(-std::abs(dt) / p.tau_ltd) * std::exp(-p.a2 * (p.g_max - g_i) / span);
}

double apply_update(const PlasticityParams& p, double g_i, double dt)
{
    return std::clamp(g_i + delta_g(p, g_i, dt, branch_of(dt)), p.g_min, p.g_max);
}

} // namespace ctfsyn::plasticity
