#pragma once

#include "ctfsyn/device/trap.hpp"

#include <string>
#include <vector>

namespace ctfsyn::waveform {

enum class Shape { spike_then_tail, tail_then_spike };

Shape parse_shape(const std::string& name);
std::string to_string(Shape s);

/// Neuron voltage template: a rectangular spike of height v_pos lasting
/// t_spike and a linear tail that starts at v_neg and relaxes to 0 over t_tail.
struct WaveformTemplate {
    double v_pos;
    double v_neg;
    double t_spike = 1e-3;
    double t_tail = 20e-3;
    Shape shape = Shape::spike_then_tail;

    void validate() const;
    double duration() const noexcept { return t_spike + t_tail; }
};

WaveformTemplate gate_template();  // 9.8 V spike, -3.0 V tail
WaveformTemplate drain_template(); // 11.5 V spike, -2.7 V tail

struct Sample {
    double t;
    double v;
};

/// Breakpoints strictly increasing in t, linear in between and 0 outside.
/// Waveforms rendered from a template sit on the grid t_k = t0 + k·dt_sample.
class Waveform {
public:
    Waveform() = default;
    explicit Waveform(std::vector<Sample> samples);

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    bool empty() const noexcept { return samples_.empty(); }
    double start() const noexcept { return samples_.empty() ? 0.0 : samples_.front().t; }
    double end() const noexcept { return samples_.empty() ? 0.0 : samples_.back().t; }
    double duration() const noexcept { return end() - start(); }

    double at(double t) const noexcept;
    double max() const noexcept;
    double min() const noexcept;

private:
    std::vector<Sample> samples_;
};

/// Sampled template. In the t_tail -> 0 limit the tail collapses to nothing.
Waveform render(const WaveformTemplate& tpl, double dt_sample);

/// Grid waveform on [t0, t0 + (n-1)·dt] with all samples zero.
Waveform zeros(double t0, double dt_sample, std::size_t n);

struct Superposition {
    Waveform trace; // v_eff(t) = v_pre(t) - v_post(t - dt)
    double v_peak;  // signed extremum of largest magnitude (earliest on ties)
    double v_max;
    double v_min;

    /// Extremum of the polarity that writes on this timing branch: the
    /// positive peak for dt < 0 and the negative peak for dt >= 0. A lone
    /// standalone spike of the other polarity can be larger in magnitude
    /// than the overlap peak, which is why the branch peak is tracked apart.
    double branch_peak(double dt) const noexcept { return dt < 0.0 ? v_max : v_min; }
};

/// Evaluates both waveforms on a common grid of spacing dt_sample anchored
/// at the pre waveform start, spanning the union of both supports.
Superposition superpose(const Waveform& pre, const Waveform& post, double dt, double dt_sample);

/// Signed extremum of largest magnitude; the earlier sample wins a tie.
double signed_peak(const Waveform& w) noexcept;

/// Each sample is held for dt_sample (zero-order hold); adjacent samples
/// with identical voltage are merged into one segment.
std::vector<device::Segment> to_segments(const Waveform& w, double dt_sample);

} // namespace ctfsyn::waveform
