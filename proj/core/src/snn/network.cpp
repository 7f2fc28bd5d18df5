#include "ctfsyn/snn/network.hpp"

#include "ctfsyn/error.hpp"
#include "ctfsyn/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ctfsyn::snn {

void LifParams::validate() const
{
    if (!(tau_mem > 0.0) || !(tick > 0.0) || !(window > 0.0) || !(tail >= 0.0) || !(refractory >= 0.0))
        throw DomainError("LIF time constants must be positive");
    if (!(v_reset < v_thresh))
        throw DomainError("v_reset must be below v_thresh");
}

RuleKind parse_rule(const std::string& name)
{
    if (name == "ideal")
        return RuleKind::ideal;
    if (name == "behavioral")
        return RuleKind::behavioral;
    if (name == "device")
        return RuleKind::device;
    throw DomainError("unknown learning rule '" + name + "' (expected ideal, behavioral or device)");
}

std::string to_string(RuleKind k)
{
    switch (k) {
    case RuleKind::ideal:
        return "ideal";
    case RuleKind::behavioral:
        return "behavioral";
    case RuleKind::device:
        return "device";
    }
    return "?";
}

SnnNetwork::SnnNetwork(LifParams lif, Weights w) : lif_(lif), w_(std::move(w))
{
    lif_.validate();
    if (w_.empty())
        throw DomainError("network needs at least one input");
    for (const auto& row : w_)
        for (double g : row)
            if (!(g >= 0.0 && g <= 1.0))
                throw DomainError("synaptic conductances must lie in [0, 1]");
}

SnnNetwork SnnNetwork::random(LifParams lif, std::size_t inputs, std::uint64_t seed, double lo, double hi)
{
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw DomainError("initial weight range must lie inside [0, 1]");
    Rng rng(derive_seed(seed, "init", 0));
    std::uniform_real_distribution<double> u(lo, hi);
    Weights w(inputs);
    for (auto& row : w)
        for (double& g : row)
            g = u(rng);
    return SnnNetwork(lif, w);
}

SampleRun SnnNetwork::run_sample(const EncodedSample& s, std::optional<int> teacher, double teacher_delay) const
{
    if (s.spike_times.size() != w_.size())
        throw DomainError(fmt::format("sample has {} inputs, network expects {}", s.spike_times.size(), w_.size()));
    SampleRun out;
    const std::size_t n_in = w_.size();
    const double t_first = *std::min_element(s.spike_times.begin(), s.spike_times.end());

    if (teacher) {
        if (*teacher < 0 || *teacher >= static_cast<int>(kClasses))
            throw DomainError("teacher label out of range");
        const double t_teach = t_first + teacher_delay;
        out.first_spike[static_cast<std::size_t>(*teacher)] = t_teach;
        out.dt.resize(n_in);
        for (std::size_t i = 0; i < n_in; ++i)
            out.dt[i] = t_teach - s.spike_times[i];
        out.prediction = *teacher;
        return out;
    }

    const double h = lif_.tick;
    const auto n_ticks = static_cast<long long>(std::llround((lif_.window + lif_.tail) / h));
    std::vector<long long> arrive(n_in);
    for (std::size_t i = 0; i < n_in; ++i)
        arrive[i] = std::llround(s.spike_times[i] / h);
    const double decay = std::exp(-h / lif_.tau_mem);
    const double gain = lif_.tau_mem * (1.0 - decay);
    const auto refr_ticks = static_cast<long long>(std::llround(lif_.refractory / h));

    std::array<double, kClasses> v{};
    std::array<long long, kClasses> refr_until{};
    std::array<double, kClasses> current{};
    for (long long n = 0; n < n_ticks; ++n) {
        for (std::size_t i = 0; i < n_in; ++i)
            if (arrive[i] == n)
                for (std::size_t j = 0; j < kClasses; ++j)
                    current[j] += w_[i][j];
        for (std::size_t j = 0; j < kClasses; ++j) {
            if (n < refr_until[j]) {
                v[j] = lif_.v_reset;
                continue;
            }
            // Exact update for a current held constant over the tick.
            v[j] = v[j] * decay + current[j] * gain;
            if (v[j] >= lif_.v_thresh) {
                if (!out.first_spike[j])
                    out.first_spike[j] = static_cast<double>(n + 1) * h;
                v[j] = lif_.v_reset;
                refr_until[j] = n + 1 + refr_ticks;
            }
        }
    }
    out.v_end = v;

    // Earliest spike wins; ties go to the higher final potential, then the
    // lowest index. With no spike at all the final potential decides.
    int best = -1;
    for (std::size_t j = 0; j < kClasses; ++j) {
        if (best < 0) {
            best = static_cast<int>(j);
            continue;
        }
        const auto b = static_cast<std::size_t>(best);
        const auto& fj = out.first_spike[j];
        const auto& fb = out.first_spike[b];
        const bool j_earlier = fj && (!fb || *fj < *fb);
        const bool same_time = (fj && fb && *fj == *fb) || (!fj && !fb);
        if (j_earlier || (same_time && v[j] > v[b]))
            best = static_cast<int>(j);
    }
    out.prediction = best;
    return out;
}

double SnnNetwork::evaluate(const std::vector<EncodedSample>& samples) const
{
    if (samples.empty())
        return 0.0;
    std::size_t hits = 0;
    for (const auto& s : samples)
        if (predict(s) == s.label)
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

Learner::Learner(const RuleConfig& rule, const Weights& w0, std::uint64_t noise_seed)
    : rule_(rule), noise_rng_(derive_seed(noise_seed, "write-noise", 0))
{
    if (rule_.kind == RuleKind::behavioral)
        rule_.params.validate();
    if (rule_.kind == RuleKind::device) {
        rule_.stdp.validate();
        states_.resize(w0.size());
        for (std::size_t i = 0; i < w0.size(); ++i)
            for (std::size_t j = 0; j < kClasses; ++j)
                states_[i][j] = rule_.device.state_at(rule_.device.v_t_max() - w0[i][j] * rule_.device.range());
    }
    if (!(rule_.write_noise >= 0.0))
        throw DomainError("write noise must be >= 0");
}

const std::vector<device::Segment>& Learner::drive_for(double dt)
{
    const double ds = rule_.stdp.dt_sample;
    const long long key = std::llround(dt / ds);
    auto it = drive_cache_.find(key);
    if (it != drive_cache_.end())
        return it->second;
    const auto pre = waveform::render(rule_.stdp.gate, ds);
    const auto post = waveform::render(rule_.stdp.drain, ds);
    const auto sup = waveform::superpose(pre, post, static_cast<double>(key) * ds, ds);
    return drive_cache_.emplace(key, waveform::to_segments(sup.trace, ds)).first->second;
}

double Learner::update(double g_i, double dt)
{
    switch (rule_.kind) {
    case RuleKind::ideal: {
        const double tau = dt >= 0.0 ? rule_.params.tau_ltp : rule_.params.tau_ltd;
        const double mag = rule_.eta * std::exp(-std::abs(dt) / tau);
        return dt >= 0.0 ? mag : -mag;
    }
    case RuleKind::behavioral:
        return plasticity::delta_g(rule_.params, g_i, dt, plasticity::branch_of(dt));
    case RuleKind::device: {
        const auto& dev = rule_.device;
        const auto s0 = dev.state_at(dev.v_t_max() - std::clamp(g_i, 0.0, 1.0) * dev.range());
        const auto s1 = dev.apply_segments(s0, drive_for(dt));
        return (s0.v_t - s1.v_t) / dev.range();
    }
    }
    return 0.0;
}

double Learner::device_update(std::size_t i, std::size_t j, double dt)
{
    const auto& dev = rule_.device;
    auto& st = states_[i][j];
    st = dev.apply_segments(st, drive_for(dt));
    return (dev.v_t_max() - st.v_t) / dev.range();
}

void Learner::write(SnnNetwork& net, std::size_t j, const std::vector<double>& dt)
{
    auto& w = net.weights();
    std::normal_distribution<double> noise(0.0, rule_.write_noise > 0.0 ? rule_.write_noise : 1.0);
    for (std::size_t i = 0; i < dt.size(); ++i) {
        double g;
        if (rule_.kind == RuleKind::device)
            g = device_update(i, j, dt[i]);
        else
            g = std::clamp(w[i][j] + update(w[i][j], dt[i]), 0.0, 1.0);
        if (rule_.write_noise > 0.0) {
            g = std::clamp(g + noise(noise_rng_), 0.0, 1.0);
            if (rule_.kind == RuleKind::device) {
                const auto& dev = rule_.device;
                states_[i][j] = dev.state_at(dev.v_t_max() - g * dev.range());
            }
        }
        w[i][j] = g;
    }
}

void Learner::present(SnnNetwork& net, const EncodedSample& s)
{
    const auto taught = net.run_sample(s, s.label, rule_.teacher_delay);
    write(net, static_cast<std::size_t>(s.label), taught.dt);
}

TrainResult train_seed(const Dataset& data, const RunSpec& spec, std::uint64_t seed)
{
    const auto split = stratified_split(data, spec.train_per_class, seed);
    const auto enc = Encoder::fit(data, split.train, spec.lif.window, spec.encoding);
    const auto train = enc.encode(data, split.train);
    const auto test = enc.encode(data, split.test);

    auto net = SnnNetwork::random(spec.lif, enc.inputs(), seed, spec.init_lo, spec.init_hi);
    Learner learner(spec.rule, net.weights(), seed);

    TrainResult res;
    res.initial_accuracy = net.evaluate(test);
    Rng order_rng(derive_seed(seed, "order", 0));
    std::vector<std::size_t> order(train.size());
    for (std::size_t e = 0; e < spec.epochs; ++e) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), order_rng);
        for (std::size_t k : order)
            learner.present(net, train[k]);
        res.trace.push_back(net.evaluate(test));
    }
    res.weights = net.weights();
    return res;
}

StudyResult study(const Dataset& data, const RunSpec& spec, std::uint64_t master, std::size_t seeds,
                  double write_noise)
{
    if (seeds == 0)
        throw DomainError("study needs at least one seed");
    if (!(write_noise >= 0.0))
        throw DomainError("write noise must be >= 0");
    StudyResult r;
    for (std::size_t k = 0; k < seeds; ++k)
        r.run_seeds.push_back(derive_seed(master, "snn-run", k));
    r.clean.resize(seeds);
    if (write_noise > 0.0)
        r.noisy.resize(seeds);
    RunSpec noisy_spec = spec;
    noisy_spec.rule.write_noise = write_noise;

    parallel_for(seeds, [&](std::size_t k) {
        r.clean[k] = train_seed(data, spec, r.run_seeds[k]);
        if (write_noise > 0.0)
            r.noisy[k] = train_seed(data, noisy_spec, r.run_seeds[k]);
    });

    auto final_of = [](const TrainResult& t) { return t.trace.empty() ? t.initial_accuracy : t.trace.back(); };
    const double n = static_cast<double>(seeds);
    for (std::size_t k = 0; k < seeds; ++k) {
        r.mean_initial += r.clean[k].initial_accuracy / n;
        r.mean_final += final_of(r.clean[k]) / n;
        if (write_noise > 0.0) {
            r.mean_final_noisy += final_of(r.noisy[k]) / n;
            r.mean_abs_noise_delta += std::abs(final_of(r.noisy[k]) - final_of(r.clean[k])) / n;
        }
    }
    if (write_noise == 0.0)
        r.mean_final_noisy = r.mean_final;
    return r;
}

} // namespace ctfsyn::snn
