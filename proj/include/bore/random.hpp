#pragma once

#include <cstdint>
#include <random>

namespace bore {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; mixes a base seed with a stream id into an independent seed.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named substreams so each consumer of randomness is reproducible on its own.
enum class Stream : std::uint64_t {
  Objective = 1,
  Observation = 2,
  Policy = 3,
  Initial = 4,
  Features = 5,
  Bootstrap = 6,
};

[[nodiscard]] inline Rng make_rng(std::uint64_t seed, Stream stream) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(stream)));
}

/// U[0, 1) from 53 random bits; unlike std::uniform_real_distribution its output is
/// fixed by the engine alone.
[[nodiscard]] inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace bore
