#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace qnet {

// Portable pseudo-random source used everywhere in the simulator.
//
// Generator: xoshiro256** (Blackman & Vigna, 2018). The 256-bit state is
// filled from a 64-bit seed with four successive SplitMix64 outputs.
// Doubles are formed from the top 53 bits: (next() >> 11) * 2^-53, which
// gives a uniform value in [0, 1). Bounded integers use Lemire's
// multiply-and-reject method, so no std:: distribution (whose output is
// implementation-defined) is involved and streams reproduce bit-for-bit
// on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> state_{};
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent substream seed from a base seed and a sequence of
// keys: s = base; for each key k: s = mix64(s ^ mix64(k + 0x9e3779b97f4a7c15)).
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> keys);

}  // namespace qnet
