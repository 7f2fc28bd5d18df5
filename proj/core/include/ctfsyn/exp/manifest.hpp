#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ctfsyn::exp {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Library version baked in at build time.
const char* version() noexcept;

struct OutputRecord {
    std::string file; // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string recipe;
    std::uint64_t seed = 0;
    std::string version;
    std::string config_sha256; // over the canonical dump of the effective config
    std::vector<OutputRecord> outputs;
    double wall_clock_s = 0.0;
};

std::string to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

} // namespace ctfsyn::exp
