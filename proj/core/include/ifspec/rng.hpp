#pragma once

#include <cstdint>
#include <random>

namespace ifspec {

// Deterministic, platform-independent draws: mt19937_64 plus hand-rolled
// mappings (std::uniform_*_distribution is not reproducible across libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0,1) with 53-bit resolution
  double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  // uniform in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::mt19937_64 engine_;
};

// stateless seed derivation for worker partitions (splitmix64 step)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace ifspec
