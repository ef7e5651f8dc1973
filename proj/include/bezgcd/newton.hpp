#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bezgcd/densela.hpp"

namespace bezgcd {

/// How kkt_step reacts to a KKT matrix that is singular to working precision.
enum class KktMode {
  /// Raise SingularKkt.
  Strict,
  /// Fall back to the minimum-norm projection step built from a
  /// rank-revealing QR of J^T. Coincides with the strict step when J has full
  /// row rank; raises SingularKkt only if g is inconsistent with range(J).
  MinNormFallback,
};

struct NewtonConfig {
  /// Stop once ||d_k|| < epsilon.
  double epsilon = 0.1;
  /// Step width, x_{k+1} = x_k + alpha d_k.
  double alpha = 1.0;
  int max_iter = 100;
  KktMode kkt_mode = KktMode::Strict;

  /// Throws InvalidProblem unless epsilon > 0, 0 < alpha <= 1, max_iter >= 1.
  void validate() const;
};

struct KktStep {
  Vector direction;
  Vector multipliers;
  double direction_norm = 0.0;
  /// Set when the step came from the minimum-norm fallback.
  bool rank_deficient = false;
  /// Numerical row rank of J used by the fallback (rows(J) for the direct solve).
  int rank = 0;
};

/// Solves [[I, -J^T], [J, 0]] (d, lambda) = -(grad_f, g).
///
/// Strict mode is one dense LU solve of the (N + M)-square system followed by
/// one step of iterative refinement.
KktStep kkt_step(std::span<const double> grad_f, std::span<const double> g, const Matrix& jacobian,
                 KktMode mode = KktMode::Strict);

/// Relative rank threshold used by the minimum-norm fallback.
inline constexpr double kkt_rank_tolerance = 1e-12;

struct NewtonCallbacks {
  std::function<Vector(std::span<const double>)> gradient;
  std::function<Vector(std::span<const double>)> constraints;
  std::function<Matrix(std::span<const double>)> jacobian;
};

/// One computed search direction.
struct IterationRecord {
  int iteration = 0;
  double direction_norm = 0.0;
  double constraint_norm = 0.0;
  /// ||J d + g||, the second block row of the KKT system.
  double kkt_residual = 0.0;
  bool rank_deficient = false;
};

struct MinimizeResult {
  Vector x;
  /// Number of steps applied.
  int iterations = 0;
  bool converged = false;
  /// One record per KKT solve, including the terminal one.
  std::vector<IterationRecord> trace;
};

/// Tanabe's modified Newton iteration for min f(x) s.t. g(x) = 0.
///
/// Computes d_k from kkt_step at x_k; stops with converged = true as soon as
/// ||d_k|| < epsilon and returns x_k, otherwise sets x_{k+1} = x_k + alpha d_k.
/// After max_iter applied steps without meeting the criterion the last iterate
/// is returned with converged = false. Non-finite callback output raises
/// NumericalBreakdown carrying the iteration index.
MinimizeResult minimize(Vector x0, const NewtonCallbacks& callbacks, const NewtonConfig& config);

}  // namespace bezgcd
