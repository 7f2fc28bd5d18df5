#pragma once

#include "ctfsyn/device/trap.hpp"
#include "ctfsyn/plasticity/model.hpp"
#include "ctfsyn/rng.hpp"
#include "ctfsyn/snn/iris.hpp"
#include "ctfsyn/waveform/stdp.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctfsyn::snn {

/// Output neuron: each input spike switches on a sustained current equal to
/// its synaptic conductance, integrated by a leaky membrane on a fixed tick.
struct LifParams {
    double tau_mem = 0.1;   // s
    double v_thresh = 0.01; // same units as conductance × seconds
    double v_reset = 0.0;
    double refractory = 5e-3; // s
    double tick = 1e-3;       // s
    double window = 1.0;      // encoding window, s
    double tail = 0.2;        // extra simulated time after the window, s

    void validate() const;
};

enum class RuleKind { ideal, behavioral, device };

RuleKind parse_rule(const std::string& name);
std::string to_string(RuleKind k);

/// Learning-rule binding. `ideal` is the additive exponential STDP baseline
/// with hard bounds; `behavioral` is the fitted flash-synapse model; `device`
/// drives one CTF device per synapse with the superposed neuron waveforms.
struct RuleConfig {
    RuleKind kind = RuleKind::behavioral;
    plasticity::PlasticityParams params{};
    double eta = 0.01;            // ideal rule amplitude
    double teacher_delay = 0.01;  // s after the earliest input spike
    double write_noise = 0.0;     // σ/Range of Gaussian noise on every write
    device::CtfDevice device{};
    waveform::StdpSetup stdp{};
};

/// Row i holds the conductances from input afferent i to the output neurons.
using Weights = std::vector<std::array<double, kClasses>>;

struct SampleRun {
    std::array<std::optional<double>, kClasses> first_spike;
    std::array<double, kClasses> v_end{};
    std::vector<double> dt; // t_post − t_pre for the teacher neuron's synapses
    int prediction = -1;
};

class SnnNetwork {
public:
    SnnNetwork(LifParams lif, Weights w);

    /// Weights uniform in [lo, hi].
    static SnnNetwork random(LifParams lif, std::size_t inputs, std::uint64_t seed, double lo = 0.3,
                             double hi = 0.7);

    std::size_t inputs() const noexcept { return w_.size(); }

    const LifParams& lif() const noexcept { return lif_; }
    const Weights& weights() const noexcept { return w_; }
    Weights& weights() noexcept { return w_; }

    /// With a teacher the labelled neuron fires exactly once at the teacher
    /// time and the others are held silent; without one the LIF dynamics run
    /// and the earliest spike is the prediction.
    SampleRun run_sample(const EncodedSample& s, std::optional<int> teacher, double teacher_delay = 0.01) const;

    int predict(const EncodedSample& s) const { return run_sample(s, std::nullopt).prediction; }
    double evaluate(const std::vector<EncodedSample>& samples) const;

private:
    LifParams lif_;
    Weights w_;
};

/// Per-synapse learning state; for the device rule it owns one device state
/// per synapse and caches the superposed drive for each timing offset.
class Learner {
public:
    Learner(const RuleConfig& rule, const Weights& w0, std::uint64_t noise_seed);

    /// One supervised presentation: teacher-forced run and weight update of
    /// the labelled neuron's synapses.
    void present(SnnNetwork& net, const EncodedSample& s);

    /// ΔḠ that the rule would apply to a synapse at g_i for a timing offset dt.
    double update(double g_i, double dt);

private:
    void write(SnnNetwork& net, std::size_t j, const std::vector<double>& dt);
    double device_update(std::size_t i, std::size_t j, double dt);
    const std::vector<device::Segment>& drive_for(double dt);

    RuleConfig rule_;
    std::vector<std::array<device::TrapState, kClasses>> states_;
    std::map<long long, std::vector<device::Segment>> drive_cache_;
    Rng noise_rng_;
};

struct TrainResult {
    double initial_accuracy = 0.0;
    std::vector<double> trace; // test accuracy after each epoch
    Weights weights;
};

struct RunSpec {
    LifParams lif{};
    RuleConfig rule{};
    std::size_t epochs = 50;
    std::size_t train_per_class = 40;
    Encoding encoding = Encoding::paired;
    double init_lo = 0.3;
    double init_hi = 0.7;
};

/// Full pipeline for one seed: split, encode, initialise and train. The seed
/// determines split, initial weights and presentation order; write noise
/// draws from its own stream so noisy and clean runs see the same order.
TrainResult train_seed(const Dataset& data, const RunSpec& spec, std::uint64_t seed);

struct StudyResult {
    std::vector<std::uint64_t> run_seeds;
    std::vector<TrainResult> clean;
    std::vector<TrainResult> noisy; // empty when write_noise == 0
    double mean_initial = 0.0;
    double mean_final = 0.0;
    double mean_final_noisy = 0.0;
    double mean_abs_noise_delta = 0.0; // mean over seeds of |noisy − clean| final accuracy
};

/// Trains `seeds` independent networks (run seed k = derive_seed(master,
/// "snn-run", k)) in parallel. With write_noise > 0 every seed is trained a
/// second time with noisy writes, seeing the same split, init and order.
StudyResult study(const Dataset& data, const RunSpec& spec, std::uint64_t master, std::size_t seeds,
                  double write_noise);

} // namespace ctfsyn::snn
