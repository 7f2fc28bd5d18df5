#pragma once

#include "ctfsyn/plasticity/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ctfsyn::plasticity {

struct PlasticitySample {
    double g_i;
    double dt; // s; the branch follows its sign
    double dg_observed;
};

struct FitOptions {
    int starts = 16;
    std::uint64_t seed = 1;
    int max_iterations = 500;
    double g_min = 0.0;
    double g_max = 1.0;
};

struct FitResult {
    PlasticityParams params;
    double rmse = 0.0;
    int best_start = 0;
};

/// Bounded Levenberg-Marquardt from several seeded random starts; the best
/// local optimum wins (lowest start index on ties).
FitResult fit(std::span<const PlasticitySample> samples, const FitOptions& opts = {});

double rmse(const PlasticityParams& p, std::span<const PlasticitySample> samples);

/// Noise-free samples on a (g_i, dt) grid covering both branches.
std::vector<PlasticitySample> generate_samples(const PlasticityParams& p, std::span<const double> g_grid,
                                               std::span<const double> dt_grid);

} // namespace ctfsyn::plasticity
