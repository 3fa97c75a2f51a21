#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Recorded in manifests so noise and synthetic fixtures can be replayed.
inline constexpr std::string_view kNoiseGeneratorId = "mt19937_64+box-muller/v1";

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for stream `index` under `master`; independent of how streams are
// scheduled across workers.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index));
}

// Gaussian and uniform variates from mt19937_64 through explicit transforms,
// so the streams are identical across standard library implementations.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian();
  Vector gaussian(Index n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mmgsep
