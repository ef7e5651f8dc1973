#pragma once

#include <cstdint>
#include <vector>

#include "bezgcd/poly.hpp"

namespace bezgcd {

/// Parameters of a batch of noisy instances F_i = C_i H + (e / ||N_i||) N_i.
struct InstanceSpec {
  int m = 10;
  int n = 10;
  int d = 3;
  /// Norm of the noise added to each polynomial.
  double e = 0.01;
  std::uint64_t seed = 1;
  int count = 1;

  /// Throws InvalidProblem unless 1 <= d < m, n >= 2, e >= 0, count >= 1.
  void validate() const;
};

struct Instance {
  std::vector<Polynomial> polys;
  Polynomial true_gcd;
  /// Planted cofactors C_i, degree m - d.
  std::vector<Polynomial> true_factors;
  double noise_norm = 0.0;
};

/// Coefficients of H, C_i and the noise N_i (degree m - 1) are drawn
/// uniformly from [-10, 10]; draws whose leading coefficient is below 1e-3 in
/// magnitude are redrawn. Instance k uses its own substream
/// substream_seed(spec.seed, k), so instances are independent of batch size
/// and order of generation.
std::vector<Instance> generate(const InstanceSpec& spec);

/// Single instance from a substream seed.
Instance generate_instance(int m, int n, int d, double e, std::uint64_t stream_seed);

/// SplitMix64 mix of (seed, index): seeds for independent substreams.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

inline constexpr double coefficient_bound = 10.0;
inline constexpr double leading_rejection_threshold = 1e-3;

}  // namespace bezgcd
