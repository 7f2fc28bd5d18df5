#include "ctfsyn/waveform/waveform.hpp"

#include "ctfsyn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ctfsyn::waveform {

Shape parse_shape(const std::string& name)
{
    if (name == "spike_then_tail")
        return Shape::spike_then_tail;
    if (name == "tail_then_spike")
        return Shape::tail_then_spike;
    throw DomainError("unknown waveform shape '" + name + "'");
}

std::string to_string(Shape s)
{
    return s == Shape::spike_then_tail ? "spike_then_tail" : "tail_then_spike";
}

void WaveformTemplate::validate() const
{
    if (!std::isfinite(v_pos) || !std::isfinite(v_neg) || v_pos == 0.0 || v_neg == 0.0 ||
        std::signbit(v_pos) == std::signbit(v_neg))
        throw DomainError(fmt::format("template peaks must be non-zero with opposite signs ({} / {})", v_pos, v_neg));
    if (!(t_spike > 0.0) || !(t_tail > 0.0))
        throw DomainError("template durations must be positive");
}

WaveformTemplate gate_template()
{
    return {9.8, -3.0, 1e-3, 20e-3, Shape::spike_then_tail};
}

WaveformTemplate drain_template()
{
    return {11.5, -2.7, 1e-3, 20e-3, Shape::spike_then_tail};
}

Waveform::Waveform(std::vector<Sample> samples) : samples_(std::move(samples))
{
    for (std::size_t i = 1; i < samples_.size(); ++i)
        if (!(samples_[i].t > samples_[i - 1].t))
            throw DomainError("waveform breakpoints must be strictly increasing in time");
}

double Waveform::at(double t) const noexcept
{
    if (samples_.empty())
        return 0.0;
    // Times within rounding distance of the support edges count as inside,
    // otherwise a grid-aligned shift could drop the first or last sample.
    const double edge_tol =
        samples_.size() > 1 ? 1e-9 * (samples_.back().t - samples_.front().t) / double(samples_.size() - 1) : 0.0;
    if (t < samples_.front().t - edge_tol || t > samples_.back().t + edge_tol)
        return 0.0;
    t = std::clamp(t, samples_.front().t, samples_.back().t);
    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Sample& s, double x) { return s.t < x; });
    if (it == samples_.begin())
        return it->v;
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    // Snap to a breakpoint when t is within rounding distance of it, so that
    // grid-aligned shifts reproduce the sample values exactly.
    const double span = hi.t - lo.t;
    const double tol = 1e-9 * span;
    if (hi.t - t <= tol)
        return hi.v;
    if (t - lo.t <= tol)
        return lo.v;
    const double w = (t - lo.t) / span;
    return lo.v + w * (hi.v - lo.v);
}

double Waveform::max() const noexcept
{
    double m = samples_.empty() ? 0.0 : samples_.front().v;
    for (const auto& s : samples_)
        m = std::max(m, s.v);
    return m;
}

double Waveform::min() const noexcept
{
    double m = samples_.empty() ? 0.0 : samples_.front().v;
    for (const auto& s : samples_)
        m = std::min(m, s.v);
    return m;
}

Waveform render(const WaveformTemplate& tpl, double dt_sample)
{
    tpl.validate();
    if (!(dt_sample > 0.0))
        throw DomainError("dt_sample must be positive");
    // Durations are rounded to whole samples; the final sample is the return to 0.
    const auto n = static_cast<std::size_t>(std::llround(tpl.duration() / dt_sample));
    if (n < 1)
        throw DomainError("sampling interval longer than the whole template");
    std::vector<Sample> out;
    out.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt_sample;
        double v = 0.0;
        if (tpl.shape == Shape::spike_then_tail) {
            v = t < tpl.t_spike ? tpl.v_pos : tpl.v_neg * std::max(0.0, 1.0 - (t - tpl.t_spike) / tpl.t_tail);
        } else {
            v = t < tpl.t_tail ? tpl.v_neg * (t / tpl.t_tail) : tpl.v_pos;
        }
        out.push_back({t, v});
    }
    out.push_back({static_cast<double>(n) * dt_sample, 0.0});
    return Waveform(std::move(out));
}

Waveform zeros(double t0, double dt_sample, std::size_t n)
{
    std::vector<Sample> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = {t0 + static_cast<double>(k) * dt_sample, 0.0};
    return Waveform(std::move(out));
}

double signed_peak(const Waveform& w) noexcept
{
    double best = 0.0;
    for (const auto& s : w.samples())
        if (std::abs(s.v) > std::abs(best))
            best = s.v;
    return best;
}

Superposition superpose(const Waveform& pre, const Waveform& post, double dt, double dt_sample)
{
    if (!std::isfinite(dt))
        throw DomainError("dt must be finite");
    if (!(dt_sample > 0.0))
        throw DomainError("dt_sample must be positive");
    if (pre.empty() && post.empty())
        return {Waveform{}, 0.0, 0.0, 0.0};

    const double anchor = pre.empty() ? post.start() + dt : pre.start();
    double lo = anchor, hi = anchor;
    if (!pre.empty()) {
        lo = std::min(lo, pre.start());
        hi = std::max(hi, pre.end());
    }
    if (!post.empty()) {
        lo = std::min(lo, post.start() + dt);
        hi = std::max(hi, post.end() + dt);
    }
    const auto k_lo = static_cast<long long>(std::floor((lo - anchor) / dt_sample + 1e-9));
    const auto k_hi = static_cast<long long>(std::ceil((hi - anchor) / dt_sample - 1e-9));

    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (long long k = k_lo; k <= k_hi; ++k) {
        const double t = anchor + static_cast<double>(k) * dt_sample;
        out.push_back({t, pre.at(t) - post.at(t - dt)});
    }
    Waveform trace(std::move(out));
    const double peak = signed_peak(trace);
    const double hi_v = std::max(0.0, trace.max());
    const double lo_v = std::min(0.0, trace.min());
    return {std::move(trace), peak, hi_v, lo_v};
}

std::vector<device::Segment> to_segments(const Waveform& w, double dt_sample)
{
    std::vector<device::Segment> segs;
    for (const auto& s : w.samples()) {
        if (!segs.empty() && segs.back().v_g == s.v)
            segs.back().duration += dt_sample;
        else
            segs.push_back({s.v, dt_sample});
    }
    return segs;
}

} // namespace ctfsyn::waveform
