#include "bezgcd/newton.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

void NewtonConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidProblem("NewtonConfig: epsilon must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidProblem("NewtonConfig: alpha must be in (0, 1]");
  if (max_iter < 1) throw InvalidProblem("NewtonConfig: max_iter must be >= 1");
}

namespace {

KktStep direct_step(std::span<const double> grad_f, std::span<const double> g, const Matrix& jac) {
  const std::size_t n = grad_f.size();
  const std::size_t m = g.size();
  Matrix kkt(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i) kkt(i, i) = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      kkt(n + i, j) = jac(i, j);
      kkt(j, n + i) = -jac(i, j);
    }
  Vector rhs(n + m);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -grad_f[i];
  for (std::size_t i = 0; i < m; ++i) rhs[n + i] = -g[i];

  // One step of iterative refinement keeps the residual at rounding level
  // when the KKT matrix is badly scaled.
  const LuFactorization lu(kkt);
  Vector sol = lu.solve(rhs);
  const Vector residual = subtract(rhs, kkt * sol);
  const Vector correction = lu.solve(residual);
  for (std::size_t i = 0; i < sol.size(); ++i) sol[i] += correction[i];
  KktStep step;
  step.direction.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
  step.multipliers.assign(sol.begin() + static_cast<std::ptrdiff_t>(n), sol.end());
  step.direction_norm = norm2(step.direction);
  step.rank = static_cast<int>(m);
  return step;
}

// With J^T P = Q R and r = numerical rank:
//   d      = -grad_f + Q_r (Q_r^T grad_f + z),   R_r^T z = -P^T g  (first r rows)
//   lambda : R_r (P^T lambda) = Q_r^T grad_f + z, free components set to zero.
KktStep min_norm_step(std::span<const double> grad_f, std::span<const double> g, const Matrix& jac) {
  const std::size_t n = grad_f.size();
  const std::size_t m = g.size();
  const PivotedQr qr(jac.transpose());
  const int r = qr.rank(kkt_rank_tolerance);
  const auto rr = static_cast<std::size_t>(r);

  Vector qtg = qr.apply_qt(grad_f);

  // Forward substitution with R_r^T on the permuted rows of -rhs.
  auto forward = [&](std::span<const double> rhs) {
    Vector z(rr, 0.0);
    for (std::size_t i = 0; i < rr; ++i) {
      double s = -rhs[static_cast<std::size_t>(qr.permutation(i))];
      for (std::size_t k = 0; k < i; ++k) s -= qr.r(k, i) * z[k];
      z[i] = s / qr.r(i, i);
    }
    return z;
  };
  const Vector z = forward(g);

  // Inconsistent part of g: the remaining equations of R_r^T z = -P^T g.
  double inconsistency = 0.0;
  const double gscale = norm2(g);
  for (std::size_t i = rr; i < m; ++i) {
    double s = -g[static_cast<std::size_t>(qr.permutation(i))];
    for (std::size_t k = 0; k < rr; ++k) s -= qr.r(k, i) * z[k];
    inconsistency = std::max(inconsistency, std::abs(s));
  }
  // Rounding in the discarded rows of R is of order tolerance * |R_00| * |z|.
  const double zscale = norm2(z);
  const double allowed =
      1e-8 * (1.0 + gscale) + (rr > 0 ? kkt_rank_tolerance * std::abs(qr.r(0, 0)) * (1.0 + zscale) : 0.0);
  if (inconsistency > allowed)
    throw SingularKkt("kkt_step: J is row-rank deficient (rank " + std::to_string(r) + " of " +
                      std::to_string(m) + ") and g is outside its range");

  Vector coeff(n, 0.0);
  for (std::size_t i = 0; i < rr; ++i) coeff[i] = qtg[i] + z[i];
  Vector qc = qr.apply_q(coeff);

  KktStep step;
  step.direction.resize(n);
  for (std::size_t i = 0; i < n; ++i) step.direction[i] = -grad_f[i] + qc[i];

  // One refinement pass on the second block row, J d = -g, within range(J^T).
  Vector residual = jac * step.direction;
  for (std::size_t i = 0; i < m; ++i) residual[i] += g[i];
  const Vector dz = forward(residual);
  Vector padded(n, 0.0);
  for (std::size_t i = 0; i < rr; ++i) padded[i] = dz[i];
  const Vector correction = qr.apply_q(padded);
  for (std::size_t i = 0; i < n; ++i) step.direction[i] += correction[i];
  step.direction_norm = norm2(step.direction);

  Vector w(m, 0.0);
  for (std::size_t i = rr; i-- > 0;) {
    double s = coeff[i];
    for (std::size_t k = i + 1; k < rr; ++k) s -= qr.r(i, k) * w[k];
    w[i] = s / qr.r(i, i);
  }
  step.multipliers.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) step.multipliers[static_cast<std::size_t>(qr.permutation(i))] = w[i];
  step.rank_deficient = true;
  step.rank = r;
  return step;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

KktStep kkt_step(std::span<const double> grad_f, std::span<const double> g, const Matrix& jacobian,
                 KktMode mode) {
  if (jacobian.rows() != g.size() || jacobian.cols() != grad_f.size())
    throw DimensionError("kkt_step: Jacobian shape does not match gradient and constraints");
  try {
    return direct_step(grad_f, g, jacobian);
  } catch (const SingularSystem& e) {
    if (mode == KktMode::Strict)
      throw SingularKkt(std::string("kkt_step: singular KKT matrix: ") + e.what());
  }
  return min_norm_step(grad_f, g, jacobian);
}

MinimizeResult minimize(Vector x0, const NewtonCallbacks& callbacks, const NewtonConfig& config) {
  config.validate();
  MinimizeResult result;
  result.x = std::move(x0);
  Vector& x = result.x;

  for (int k = 0;; ++k) {
    const Vector grad = callbacks.gradient(x);
    if (!all_finite(grad)) throw NumericalBreakdown("minimize: non-finite gradient", k);
    const Vector g = callbacks.constraints(x);
    if (!all_finite(g)) throw NumericalBreakdown("minimize: non-finite constraints", k);
    const Matrix jac = callbacks.jacobian(x);
    if (!all_finite(jac.data())) throw NumericalBreakdown("minimize: non-finite Jacobian", k);
    if (grad.size() != x.size())
      throw DimensionError("minimize: gradient length differs from variable count");

    const KktStep step = kkt_step(grad, g, jac, config.kkt_mode);
    if (!all_finite(step.direction)) throw NumericalBreakdown("minimize: non-finite direction", k);

    Vector jd = jac * step.direction;
    for (std::size_t i = 0; i < jd.size(); ++i) jd[i] += g[i];
    result.trace.push_back(
        {k, step.direction_norm, norm2(g), norm2(jd), step.rank_deficient});

    if (step.direction_norm < config.epsilon) {
      result.iterations = k;
      result.converged = true;
      return result;
    }
    if (k == config.max_iter) {
      result.iterations = k;
      result.converged = false;
      return result;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += config.alpha * step.direction[i];
  }
}

}  // namespace bezgcd
