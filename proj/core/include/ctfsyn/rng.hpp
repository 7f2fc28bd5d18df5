#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ctfsyn {

using Rng = std::mt19937_64;

/// Derive a task-local seed from (master seed, module tag, task index).
///
/// The tag is folded with 64-bit FNV-1a and the three words are mixed with
/// SplitMix64 finalisers, so streams for different tags or indices are
/// decorrelated while staying a pure function of their inputs.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index = 0)
{
    return Rng{derive_seed(master, tag, index)};
}

} // namespace ctfsyn
