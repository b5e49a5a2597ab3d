#pragma once

#include <cstdint>
#include <random>

#include "trek/tensor.hpp"

namespace trek {

// SplitMix64 finalizer. Every engine seed passes through this so that nearby
// user seeds (0, 1, 2, ...) land on well separated engine states.
std::uint64_t mix64(std::uint64_t z);

// Seed value of substream `stream` of a base seed; feeding it to Rng gives
// the same engine state as Rng::substream(base, stream).
constexpr std::uint64_t substream_seed(std::uint64_t base, std::uint64_t stream) {
  return base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
}

// Reproducibility contract:
//  - the only entropy source is std::mt19937_64, seeded via mix64
//  - uniform doubles take the top 53 bits of one engine draw: [0, 1)
//  - gaussians use Box-Muller (cosine branch) and consume exactly two uniforms
//  - substream t of base seed s is Rng(s + (t+1) * 0x9E3779B97F4A7C15)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static Rng substream(std::uint64_t base_seed, std::uint64_t stream) {
    return Rng(substream_seed(base_seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gaussian();

 private:
  std::mt19937_64 engine_;
};

// i.i.d. standard normal entries, filled in storage order.
Tensor3 gaussian_tensor(Dims3 dims, Rng& rng);

}  // namespace trek
