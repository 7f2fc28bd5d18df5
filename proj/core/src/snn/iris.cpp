#include "ctfsyn/snn/iris.hpp"

#include "ctfsyn/csv.hpp"
#include "ctfsyn/error.hpp"
#include "ctfsyn/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace ctfsyn::snn {

Dataset load_iris(const std::filesystem::path& path)
{
    const auto table = CsvTable::read(path);
    const char* names[] = {"sepal_length", "sepal_width", "petal_length", "petal_width"};
    std::array<std::size_t, kFeatures> cols{};
    for (std::size_t i = 0; i < kFeatures; ++i)
        cols[i] = table.column(names[i]);
    const std::size_t species = table.column("species");

    std::set<std::string> labels;
    for (const auto& row : table.rows())
        labels.insert(row[species]);
    if (labels.size() != kClasses)
        throw DomainError(fmt::format("expected {} species in {}, found {}", kClasses, path.string(), labels.size()));

    Dataset d;
    d.class_names.assign(labels.begin(), labels.end());
    for (const auto& row : table.rows()) {
        Features f{};
        for (std::size_t i = 0; i < kFeatures; ++i)
            f[i] = parse_number(row[cols[i]]);
        d.x.push_back(f);
        const auto it = std::find(d.class_names.begin(), d.class_names.end(), row[species]);
        d.y.push_back(static_cast<int>(it - d.class_names.begin()));
    }
    return d;
}

Split stratified_split(const Dataset& data, std::size_t train_per_class, std::uint64_t seed)
{
    Split s;
    for (std::size_t c = 0; c < kClasses; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.y[i] == static_cast<int>(c))
                idx.push_back(i);
        if (idx.size() <= train_per_class)
            throw DomainError(fmt::format("class {} has only {} rows; cannot hold out a test set", c, idx.size()));
        Rng rng(derive_seed(seed, "split", c));
        std::shuffle(idx.begin(), idx.end(), rng);
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_per_class));
        s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(train_per_class), idx.end());
    }
    return s;
}

Encoding parse_encoding(const std::string& name)
{
    if (name == "latency")
        return Encoding::latency;
    if (name == "paired")
        return Encoding::paired;
    throw DomainError("unknown encoding '" + name + "' (expected latency or paired)");
}

std::string to_string(Encoding e)
{
    return e == Encoding::latency ? "latency" : "paired";
}

std::size_t input_count(Encoding e) noexcept
{
    return e == Encoding::latency ? kFeatures : 2 * kFeatures;
}

Encoder::Encoder(Features lo, Features hi, double window, Encoding encoding)
    : lo_(lo), hi_(hi), window_(window), encoding_(encoding)
{
    if (!(window_ > 0.0))
        throw DomainError("encoding window must be positive");
    for (std::size_t i = 0; i < kFeatures; ++i)
        if (!(hi_[i] > lo_[i]))
            throw DomainError(fmt::format("feature {} has a degenerate range [{}, {}]", i, lo_[i], hi_[i]));
}

Encoder Encoder::fit(const Dataset& data, const std::vector<std::size_t>& rows, double window, Encoding encoding)
{
    if (rows.empty())
        throw DomainError("cannot fit an encoder on zero rows");
    Features lo = data.x[rows.front()], hi = lo;
    for (std::size_t r : rows)
        for (std::size_t i = 0; i < kFeatures; ++i) {
            lo[i] = std::min(lo[i], data.x[r][i]);
            hi[i] = std::max(hi[i], data.x[r][i]);
        }
    return Encoder(lo, hi, window, encoding);
}

EncodedSample Encoder::encode(const Features& f, int label) const
{
    if (label < 0 || label >= static_cast<int>(kClasses))
        throw DomainError("label out of range");
    EncodedSample s{};
    s.label = label;
    s.spike_times.resize(inputs());
    for (std::size_t i = 0; i < kFeatures; ++i) {
        const double xn = std::clamp((f[i] - lo_[i]) / (hi_[i] - lo_[i]), 0.0, 1.0);
        s.spike_times[i] = window_ * (1.0 - xn);
        if (encoding_ == Encoding::paired)
            s.spike_times[kFeatures + i] = window_ * xn;
    }
    return s;
}

std::vector<EncodedSample> Encoder::encode(const Dataset& data, const std::vector<std::size_t>& rows) const
{
    std::vector<EncodedSample> out;
    out.reserve(rows.size());
    for (std::size_t r : rows)
        out.push_back(encode(data.x[r], data.y[r]));
    return out;
}

} // namespace ctfsyn::snn
