#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "d4/program.hpp"
#include "d4/rng.hpp"

namespace d4 {

struct NoiseModel {
  double p_depol2 = 0.002;
  double p_read_0given1 = 2.37e-3;
  double p_read_1given0 = 0.82e-3;
  bool gate_enabled = true;
  bool readout_enabled = true;

  static NoiseModel none();
  void validate() const;  // OutOfRange
  bool any() const;
  double flip_probability(int true_bit) const;
  // M[measured][true], column-stochastic
  std::array<double, 4> readout_matrix() const;
};

// independent asymmetric flips; bit k uses stream (seed, k)
std::vector<int> apply_readout_noise(const std::vector<int>& bits, const NoiseModel& model,
                                     std::uint64_t seed);
int flip_readout(int bit, const NoiseModel& model, Rng& rng);

struct MitigatedEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double raw = 0.0;
  double raw_stderr = 0.0;
};

// `patterns` holds one measured bit pattern over the support Q per shot (bit k = qubit k of Q).
// The corrected estimator is f evaluated on the (M^-1)^{x|Q|} transformed distribution.
MitigatedEstimate mitigate_readout(const std::vector<std::uint32_t>& patterns, int support_size,
                                   const std::function<double(std::uint32_t)>& f,
                                   const NoiseModel& model);

// After every two-qubit gate, with probability p_depol2, a uniformly random non-identity
// two-qubit Pauli. A ZZZPhase counts as three two-qubit gates on (a,b), (b,c), (a,b).
Program apply_gate_noise(const Program& program, const NoiseModel& model, std::uint64_t seed);

}  // namespace d4
