#pragma once

#include "ctfsyn/exp/config.hpp"

#include <string>
#include <vector>

namespace ctfsyn::exp {

/// The quantities that pin the transport constants down.
struct DeviceMetrics {
    double program_pulses = 0.0; // identical pulses to cross the window upwards
    double erase_pulses = 0.0;
    double program_threshold = 0.0; // V, range-vs-voltage line extrapolated to zero
    double erase_threshold = 0.0;
    double program_current = 0.0; // A, tunnel-oxide current at the reference state
    double erase_current = 0.0;
};

/// A traversal that exhausts the pulse budget reports its count as NaN.
DeviceMetrics measure_device(const device::CtfDevice& dev, const ExperimentConfig& cfg);

struct CalibrationRow {
    std::string quantity;
    double value;
    double target;
    double lower;
    double upper;
    bool ok;
};

struct CalibrationReport {
    DeviceConfig device;
    DeviceMetrics metrics;
    std::vector<CalibrationRow> rows;
    std::vector<CalibrationRow> initial_rows; // same table for the starting device
    int iterations = 0;
    double final_cost = 0.0;
    bool converged = false; // every row inside its tolerance
};

/// Least squares over the four FN constants, the charge centroid and
/// the neutral threshold, starting from the configured device. Pulse counts
/// enter as continuous crossing times, which are smooth in the parameters
/// where integer counts are not.
CalibrationReport calibrate(const ExperimentConfig& cfg);

std::vector<CalibrationRow> calibration_rows(const DeviceMetrics& m, const CalibrateConfig& targets);

} // namespace ctfsyn::exp
