#pragma once

// Counter-based splittable generator. Stream (seed, index) produces
//   x_n = mix(key + n * gamma),  key = mix(seed ^ mix(index + c)),
// so sample i of a batch can be generated anywhere, in any order, by any
// thread, and still come out the same.

#include <cstdint>
#include <limits>

namespace homocone {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next() { return mix64(key_ + (++counter_) * kGamma); }
  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double normal();
  /// Gamma(shape, rate 1). Requires shape > 0.
  double gamma(double shape);

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace homocone
