#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ctfsyn::snn {

inline constexpr std::size_t kFeatures = 4;
inline constexpr std::size_t kClasses = 3;

using Features = std::array<double, kFeatures>;

struct Dataset {
    std::vector<Features> x;
    std::vector<int> y;
    std::vector<std::string> class_names; // sorted, index = label

    std::size_t size() const noexcept { return x.size(); }
};

/// Reads the canonical 150-row CSV (four measurements and a species column).
Dataset load_iris(const std::filesystem::path& path);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per class, a seeded shuffle puts the first train_per_class rows in train.
Split stratified_split(const Dataset& data, std::size_t train_per_class, std::uint64_t seed);

struct EncodedSample {
    std::vector<double> spike_times; // s, one per input afferent
    int label;
};

/// `latency` gives one afferent per feature. `paired` adds a mirrored
/// afferent per feature (t = window·x) so mid-range values are not always
/// beaten by the class with the largest measurements.
enum class Encoding { latency, paired };

Encoding parse_encoding(const std::string& name);
std::string to_string(Encoding e);
std::size_t input_count(Encoding e) noexcept;

/// Latency code: min-max scaling fitted on the training rows, clipped to
/// [0, 1], then t = window·(1 − x). Larger features fire earlier.
class Encoder {
public:
    Encoder(Features lo, Features hi, double window, Encoding encoding = Encoding::paired);
    static Encoder fit(const Dataset& data, const std::vector<std::size_t>& rows, double window,
                       Encoding encoding = Encoding::paired);

    EncodedSample encode(const Features& f, int label) const;
    std::vector<EncodedSample> encode(const Dataset& data, const std::vector<std::size_t>& rows) const;

    const Features& lo() const noexcept { return lo_; }
    const Features& hi() const noexcept { return hi_; }
    double window() const noexcept { return window_; }
    Encoding encoding() const noexcept { return encoding_; }
    std::size_t inputs() const noexcept { return input_count(encoding_); }

private:
    Features lo_, hi_;
    double window_;
    Encoding encoding_;
};

} // namespace ctfsyn::snn
