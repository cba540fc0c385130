#pragma once

#include <cstdint>

namespace seqhand {

// SplitMix64 mixer; used to derive independent per-sequence streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic generator with portable distributions. std::mt19937_64 gives
// identical bits everywhere but the std:: distributions do not, so uniform and
// normal draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  // Stream `index` of master seed `seed`; independent of draw order elsewhere.
  static Rng derive(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform in [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
};

}  // namespace seqhand
