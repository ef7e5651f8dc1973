#pragma once

// Approximate GCD of several real polynomials through the Bezout matrix.
//
// Given F_1..F_n (deg F_1 = m, deg F_k <= m) and a target degree d, find
// nearby F~_i sharing a monic degree-d divisor H~ while keeping
//   Delta = sqrt(sum_i ||F_i - F~_i||^2)
// small. The existence of the divisor is encoded as a bilinear constraint on
// the stacked Bezout matrix B(s~) of the perturbed coefficients s~:
//   (b_basis) y = b_target,
// and min ||s~ - s||^2 subject to it is solved by the modified Newton method.

#include <span>
#include <vector>

#include "bezgcd/bezout.hpp"
#include "bezgcd/densela.hpp"
#include "bezgcd/newton.hpp"
#include "bezgcd/poly.hpp"

namespace bezgcd {

/// Optimization unknowns: perturbed coefficients (polynomial by polynomial,
/// ascending) and the combination vector y of length m - d.
struct VariableVector {
  Vector s_tilde;
  Vector y;
};

/// Objective, constraints and Jacobian of the Bezout formulation for fixed
/// degrees, target GCD degree and column order.
class Formulation {
 public:
  /// `degrees[0]` is m. Throws InvalidProblem on n < 2, deg F_k > m or d outside [1, m).
  Formulation(std::vector<int> degrees, int d, ColumnOrder order);

  int m() const noexcept { return degrees_.front(); }
  int d() const noexcept { return d_; }
  int polynomial_count() const noexcept { return static_cast<int>(degrees_.size()); }
  std::span<const int> degrees() const noexcept { return degrees_; }
  ColumnOrder order() const noexcept { return order_; }
  const ColumnSplit& split() const noexcept { return split_; }

  /// sum_i (deg F_i + 1).
  std::size_t coefficient_count() const noexcept { return offsets_.back(); }
  /// N = coefficient_count() + m - d.
  std::size_t variable_count() const noexcept;
  /// (n - 1) m.
  std::size_t constraint_count() const noexcept;

  Vector pack(const VariableVector& v) const;
  VariableVector unpack(std::span<const double> x) const;
  VariableVector from_polynomials(std::span<const Polynomial> polys, Vector y) const;
  std::vector<Polynomial> polynomials(const VariableVector& v) const;

  /// ||s~ - s0||^2.
  double objective(const VariableVector& v, std::span<const double> s0) const;
  /// (2 (s~ - s0), 0_{m-d}).
  Vector objective_gradient(const VariableVector& v, std::span<const double> s0) const;
  /// (b_basis) y - b_target over the stacked Bezout matrix of s~; length (n - 1) m.
  Vector constraints(const VariableVector& v) const;
  /// Jacobian of constraints(), (n - 1) m x N.
  Matrix constraint_jacobian(const VariableVector& v) const;

  /// Least-squares y for the stacked matrix of `polys`. Throws RankDeficient.
  Vector initial_y(std::span<const Polynomial> polys) const;

 private:
  // u with u[basis_j] = y_j, u[target] = -1, so that block k of the constraint is Bez(F_1, F_k) u.
  Vector kernel_vector(std::span<const double> y) const;

  std::vector<int> degrees_;
  std::vector<std::size_t> offsets_;
  int d_;
  ColumnOrder order_;
  ColumnSplit split_;
};

enum class Orientation {
  /// Pick the column order whose initial least-squares y has the smaller norm.
  Automatic,
  Leading,
  Trailing,
};

struct ProblemSpec {
  std::vector<Polynomial> polys;
  int d = 1;
  NewtonConfig config{0.1, 1.0, 100, KktMode::MinNormFallback};
  Orientation orientation = Orientation::Automatic;
  /// Scale each input to unit norm before solving; outputs are scaled back.
  bool normalize_inputs = false;

  int m() const { return polys.empty() ? 0 : polys.front().degree(); }
  /// Throws InvalidProblem when the problem is ill-posed.
  void validate() const;
};

struct SolveResult {
  /// Monic H~, deg d.
  Polynomial gcd;
  /// F~_i = cofactors[i] * gcd.
  std::vector<Polynomial> refined;
  /// F-bar_i, deg F_i - d.
  std::vector<Polynomial> cofactors;
  double perturbation = 0.0;
  int iterations = 0;
  bool converged = false;
  /// sqrt(sum_i ||rem(F~_i, H~)||^2).
  double remainder_norm = 0.0;
  /// ||constraints|| at the returned iterate.
  double constraint_residual = 0.0;
  /// Leading coefficient of the F_1 slot collapsed below 1e-10 during optimization.
  bool degenerate = false;
  ColumnOrder order = ColumnOrder::Trailing;
  /// Final optimizer iterate (s*, y*) in the coordinates of the solved problem.
  VariableVector iterate;
  std::vector<IterationRecord> trace;
};

/// Threshold on |lc(F~_1)| below which a result is flagged degenerate.
inline constexpr double degenerate_leading_tolerance = 1e-10;

/// Full pipeline: initial y by least squares, modified Newton, Barnett
/// extraction of H~ at the optimizer's iterate, then least-squares cofactors
/// against the original inputs and metrics on the delivered F~_i.
SolveResult solve(const ProblemSpec& spec);

/// sqrt(sum_i ||a_i - b_i||^2).
double perturbation_norm(std::span<const Polynomial> a, std::span<const Polynomial> b);

}  // namespace bezgcd
