#pragma once

#include <cstdint>

namespace d4 {

// SplitMix64 counter stream; one independent stream per (seed, stream) pair
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();
  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace d4
