#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace swarmwatch {

using Rng = std::mt19937_64;

/// Derives an independent generator for a named sub-stream of a run seed, so
/// that e.g. the detector stream can be replayed without touching the scene stream.
Rng make_stream(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a; stable across platforms, used for config hashes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace swarmwatch
