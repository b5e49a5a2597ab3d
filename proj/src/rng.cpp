#include "trek/rng.hpp"

#include <cmath>
#include <numbers>

namespace trek {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_gaussian() {
  // Shift u1 into (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Tensor3 gaussian_tensor(Dims3 dims, Rng& rng) {
  Tensor3 t(dims);
  double* p = t.data();
  for (std::int64_t i = 0; i < t.size(); ++i) p[i] = rng.next_gaussian();
  return t;
}

}  // namespace trek
