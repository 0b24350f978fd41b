#pragma once

#include <cstdint>
#include <string_view>

namespace polyvem {

// Counter-based 64-bit generator built on the SplitMix64 output function
// (Steele, Lea, Flood 2014). The state advances by the golden-gamma constant
// and each output is a bijective scramble of the state, so the stream for a
// given seed is identical on every platform. Substreams are derived by
// hashing a label into the parent seed, which keeps independently seeded
// components (samplers, levels, datasets) reproducible and order-free.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [a,b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  // Independent substream labeled by a string (FNV-1a folded into the seed).
  Rng fork(std::string_view label) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001B3ULL;
    }
    Rng child(state_ ^ h);
    child.next_u64();
    return child;
  }

  Rng fork(std::uint64_t label) const {
    Rng child(state_ ^ (label * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    child.next_u64();
    return child;
  }

private:
  std::uint64_t state_;
};

} // namespace polyvem
