#pragma once

#include <span>
#include <vector>

namespace ctfsyn::plasticity {

enum class Branch { ltp, ltd };

/// Behavioral flash-synapse STDP with exponential time and weight dependence.
struct PlasticityParams {
    double g_min = 0.0;
    double g_max = 1.0;
    double dg_max_ltp = 0.07;
    double dg_max_ltd = -0.14;
    double tau_ltp = 1.05; // s
    double tau_ltd = 1.24; // s
    double a1 = 8.0;
    double a2 = 8.46;

    void validate() const;
};

/// (v - max) / (max - min) over the given peaks; results lie in [-1, 0].
std::vector<double> vpeak_normalize(std::span<const double> v_peaks);

/// Δt_LTP = -τ_LTP·v_norm (>= 0) and Δt_LTD = τ_LTD·v_norm (<= 0).
double dt_from_vpeak(const PlasticityParams& p, double v_norm, Branch branch);

/// Signed update on the given branch. The timing factor is e^{-|Δt|/τ}, so a
/// larger separation always weakens the update on either branch.
double delta_g(const PlasticityParams& p, double g_i, double dt, Branch branch);

/// Branch chosen from the sign of dt (dt >= 0 potentiates).
inline Branch branch_of(double dt) noexcept
{
    return dt >= 0.0 ? Branch::ltp : Branch::ltd;
}

/// g + ΔG clamped to [g_min, g_max].
double apply_update(const PlasticityParams& p, double g_i, double dt);

} // namespace ctfsyn::plasticity
