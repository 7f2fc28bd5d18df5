#include "ctfsyn/exp/manifest.hpp"

#include "ctfsyn/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#ifndef CTFSYN_VERSION
#define CTFSYN_VERSION "0.0.0"
#endif

namespace ctfsyn::exp {

namespace {

struct Hasher {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

    Hasher()
    {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
            throw Error("cannot initialise SHA-256");
    }
    void update(const void* data, std::size_t n)
    {
        if (EVP_DigestUpdate(ctx.get(), data, n) != 1)
            throw Error("SHA-256 update failed");
    }
    std::string hex()
    {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
            throw Error("SHA-256 finalisation failed");
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i)
            out += fmt::format("{:02x}", md[i]);
        return out;
    }
};

} // namespace

std::string sha256_hex(std::string_view data)
{
    Hasher h;
    h.update(data.data(), data.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(fmt::format("cannot read '{}' for hashing", path.string()));
    Hasher h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0)
            h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

const char* version() noexcept
{
    return CTFSYN_VERSION;
}

std::string to_json(const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["recipe"] = m.recipe;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["config_sha256"] = m.config_sha256;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& o : m.outputs)
        j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    j["wall_clock_s"] = m.wall_clock_s;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(fmt::format("cannot write '{}'", path.string()));
    out << to_json(m);
}

} // namespace ctfsyn::exp
