#pragma once

#include "ctfsyn/exp/config.hpp"
#include "ctfsyn/exp/manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ctfsyn::exp {

/// fig2a-trajectories, fig2b-thresholds, fig2c-levels, fig3b-gate-current,
/// fig4-stdp, fig6-circuit, fig7-snn, calibrate.
const std::vector<std::string>& recipe_names();

/// Runs one recipe, writes its CSV/JSON artifacts plus manifest.json into
/// out_dir (created if needed) and returns the manifest. Module errors
/// propagate unchanged; the calibrate recipe writes its report and then
/// throws NumericError when a target is missed.
RunManifest run_recipe(const std::string& name, const ExperimentConfig& cfg, std::uint64_t seed,
                       const std::filesystem::path& out_dir);

} // namespace ctfsyn::exp
