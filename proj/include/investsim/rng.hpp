#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace investsim {

// SplitMix64 step. Used for seed expansion and stream derivation.
inline constexpr uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for run r of an experiment seeded with `seed`: XOR with the run
// counter, then mix so neighbouring runs share no structure.
inline constexpr uint64_t run_seed(uint64_t seed, uint64_t r) {
  uint64_t s = seed ^ r;
  return splitmix64(s);
}

// xoshiro256++ with portable sampling helpers. std:: distributions are
// implementation-defined, so everything downstream of a seed goes through
// this class to keep traces byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Unbiased uniform integer in [0, n).
  uint64_t next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Index sampled from an explicit probability vector (CDF scan; the last
  // index absorbs any rounding slack).
  size_t sample_discrete(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("sample_discrete: empty");
    const double u = next_double();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<uint64_t, 4> state_{};
};

}  // namespace investsim
