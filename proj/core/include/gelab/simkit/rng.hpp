#pragma once

#include <cstdint>
#include <random>

namespace gelab::simkit {

/// SplitMix64 finalizer (Steele, Lea & Flood): a fixed, platform-independent 64-bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for replication `index`: the base seed itself for index 0, otherwise
/// splitmix64(seed ^ (index * 0x9E3779B97F4A7C15)). Adding replications never changes the
/// seeds of existing ones.
constexpr std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) {
  return index == 0 ? seed : splitmix64(seed ^ (index * 0x9E3779B97F4A7C15ULL));
}

/// Independent engine for one purpose (item means, noise, agents, ...) of one run.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(purpose + 0x5851F42D4C957F2DULL)));
}

}  // namespace gelab::simkit
