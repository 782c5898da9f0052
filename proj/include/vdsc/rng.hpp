#pragma once

// Seeded random streams with portable distribution transforms.
//
// Every stochastic component owns one Rng. Child streams are derived from a
// master seed and a component name via derive_seed(), so the environment,
// the strategy and the homeostat never share or interleave draws.
//
// Distribution transforms are hand-rolled on top of the (standardized)
// mt19937_64 output instead of <random> distributions, whose algorithms are
// implementation-defined and would break replay across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace vdsc {

// SplitMix64 finalizer. Used both for seed mixing and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// FNV-1a over the component name.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Child seed for a named component stream. Documented contract:
//   child = splitmix64(fnv1a64(name) ^ splitmix64(master))
// Stable across platforms and releases; run metadata depends on it.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return splitmix64(fnv1a64(name) ^ splitmix64(master));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Multiply-shift reduction of the 64-bit word.
  int uniform_int(int n) {
    const auto wide = static_cast<unsigned __int128>(engine_());
    return static_cast<int>((wide * static_cast<unsigned __int128>(n)) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; consumes two words per draw.
  double gaussian() {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vdsc
