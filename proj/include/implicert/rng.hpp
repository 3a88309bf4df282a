#pragma once

#include <cstdint>

#include "implicert/instance.hpp"
#include "implicert/restriction.hpp"

namespace implicert {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent child seed for a named purpose or index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: word n of stream (seed, stream) is a fixed
/// function of (seed, stream, n). Sampling is done here rather than with
/// <random> distributions so outputs are identical across standard libraries.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return mix64(key_ + 0xd1b54a32d192ed03ULL * counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  Sign sign() {
    if (bits_left_ == 0) {
      reservoir_ = next();
      bits_left_ = 64;
    }
    Sign s = (reservoir_ & 1U) ? kPos : kNeg;
    reservoir_ >>= 1;
    --bits_left_;
    return s;
  }

  /// Uniform in [0, n); n > 0. Bias is at most n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t reservoir_ = 0;
  int bits_left_ = 0;
};

/// Deterministic seed for tree node alpha under a global seed. Depends on
/// alpha only through its canonical (sorted) encoding.
std::uint64_t node_seed(std::uint64_t global_seed, const Restriction& alpha);

}  // namespace implicert
