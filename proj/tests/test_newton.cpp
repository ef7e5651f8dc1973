#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bezgcd/errors.hpp"
#include "bezgcd/newton.hpp"

using namespace bezgcd;

namespace {

// min ||x - target||^2 subject to a x = b (one linear constraint per row).
NewtonCallbacks projection_problem(Vector target, Matrix a, Vector b) {
  NewtonCallbacks cb;
  cb.gradient = [target](std::span<const double> x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * (x[i] - target[i]);
    return g;
  };
  cb.constraints = [a, b](std::span<const double> x) { return subtract(a * x, b); };
  cb.jacobian = [a](std::span<const double>) { return a; };
  return cb;
}

}  // namespace

TEST(KktStep, ZeroRightHandSide) {
  const KktStep s = kkt_step(Vector{0, 0}, Vector{0}, Matrix{{1, 2}});
  EXPECT_EQ(s.direction, (Vector{0, 0}));
  EXPECT_EQ(s.multipliers, (Vector{0}));
  EXPECT_EQ(s.direction_norm, 0.0);
}

TEST(KktStep, GradientAlongConstraintNormal) {
  const KktStep s = kkt_step(Vector{1, 0}, Vector{0}, Matrix{{1, 0}});
  EXPECT_NEAR(s.direction[0], 0.0, 1e-15);
  EXPECT_NEAR(s.direction[1], 0.0, 1e-15);
  ASSERT_EQ(s.multipliers.size(), 1u);
  EXPECT_NEAR(s.multipliers[0], 1.0, 1e-15);
}

TEST(KktStep, SecondBlockRowOnRandomFullRankJacobians) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6 + static_cast<std::size_t>(trial % 5);
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 5);
    Matrix j(m, n);
    Vector grad(n), g(m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) j(r, c) = nd(rng);
    for (double& v : grad) v = nd(rng);
    for (double& v : g) v = nd(rng);
    const KktStep s = kkt_step(grad, g, j);
    Vector res = j * s.direction;
    for (std::size_t r = 0; r < m; ++r) res[r] += g[r];
    EXPECT_LE(norm2(res), 1e-8 * (1.0 + norm2(g)));
    // First block row: d = -grad + J^T lambda.
    const Vector jtl = j.transpose() * s.multipliers;
    for (std::size_t c = 0; c < n; ++c) EXPECT_NEAR(s.direction[c], -grad[c] + jtl[c], 1e-10);
    EXPECT_FALSE(s.rank_deficient);
  }
}

TEST(KktStep, RankDeficientJacobian) {
  // Duplicate constraint rows: singular KKT matrix, consistent g.
  const Matrix j{{1, -1, 0}, {2, -2, 0}};
  const Vector grad{-2, 0, 4};
  const Vector g{1, 2};
  EXPECT_THROW(kkt_step(grad, g, j, KktMode::Strict), SingularKkt);

  const KktStep s = kkt_step(grad, g, j, KktMode::MinNormFallback);
  EXPECT_TRUE(s.rank_deficient);
  EXPECT_EQ(s.rank, 1);
  Vector res = j * s.direction;
  for (std::size_t r = 0; r < 2; ++r) res[r] += g[r];
  EXPECT_LE(norm2(res), 1e-12);
  // Same step as with the redundant row removed.
  const KktStep ref = kkt_step(grad, Vector{1}, Matrix{{1, -1, 0}});
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(s.direction[c], ref.direction[c], 1e-12);
  const Vector jtl = j.transpose() * s.multipliers;
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(s.direction[c], -grad[c] + jtl[c], 1e-12);
}

TEST(KktStep, InconsistentRankDeficientSystem) {
  const Matrix j{{1, -1, 0}, {2, -2, 0}};
  EXPECT_THROW(kkt_step(Vector{0, 0, 0}, Vector{1, 0}, j, KktMode::MinNormFallback), SingularKkt);
}

TEST(KktStep, ShapeMismatch) {
  EXPECT_THROW(kkt_step(Vector{0, 0}, Vector{0, 0}, Matrix{{1, 2}}), DimensionError);
}

TEST(NewtonConfig, Validation) {
  EXPECT_NO_THROW((NewtonConfig{}.validate()));
  EXPECT_THROW((NewtonConfig{0.0, 1.0, 10}.validate()), InvalidProblem);
  EXPECT_THROW((NewtonConfig{0.1, 0.0, 10}.validate()), InvalidProblem);
  EXPECT_THROW((NewtonConfig{0.1, 1.5, 10}.validate()), InvalidProblem);
  EXPECT_THROW((NewtonConfig{0.1, 1.0, 0}.validate()), InvalidProblem);
}

TEST(Minimize, FeasibleStationaryStart) {
  const NewtonCallbacks cb = projection_problem(Vector{1, 0}, Matrix{{1, 0}}, Vector{1});
  const MinimizeResult r = minimize(Vector{1, 0}, cb, NewtonConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.x, (Vector{1, 0}));
  ASSERT_EQ(r.trace.size(), 1u);
}

TEST(Minimize, FeasibleStationaryPointOfPlaneConstraint) {
  // min ||x - (2,0)||^2 s.t. x1 = 1 from (1,0): already optimal.
  const NewtonCallbacks cb = projection_problem(Vector{2, 0}, Matrix{{1, 0}}, Vector{1});
  const MinimizeResult r = minimize(Vector{1, 0}, cb, NewtonConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_NEAR(r.x[0], 1.0, 1e-15);
  EXPECT_NEAR(r.x[1], 0.0, 1e-15);
}

TEST(Minimize, ProjectionOntoDiagonalFullStepOscillates) {
  // The KKT direction uses the gradient of the squared distance, 2(x - t),
  // so a unit step overshoots the projection by a factor two: from (0,0)
  // the iterates alternate between (0,0) and (4,4) and never meet epsilon.
  const NewtonCallbacks cb = projection_problem(Vector{2, 2}, Matrix{{1, -1}}, Vector{0});
  const MinimizeResult r = minimize(Vector{0, 0}, cb, NewtonConfig{0.1, 1.0, 9});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 9);
  EXPECT_NEAR(r.x[0], 4.0, 1e-12);
  EXPECT_NEAR(r.x[1], 4.0, 1e-12);
  for (const IterationRecord& rec : r.trace) EXPECT_NEAR(rec.direction_norm, 4.0 * std::sqrt(2.0), 1e-12);
}

TEST(Minimize, ProjectionOntoDiagonalHalfStep) {
  const NewtonCallbacks cb = projection_problem(Vector{2, 2}, Matrix{{1, -1}}, Vector{0});
  const MinimizeResult r = minimize(Vector{0, 0}, cb, NewtonConfig{0.1, 0.5, 100});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 2.0, 1e-12);
}

TEST(Minimize, NonlinearConstraintReachesCircle) {
  // min ||x - (2, 0)||^2 s.t. x1^2 + x2^2 = 1; solution (1, 0). The
  // Lagrangian Hessian there is 4 I, so alpha = 1/4 contracts fastest.
  NewtonCallbacks cb;
  cb.gradient = [](std::span<const double> x) { return Vector{2 * (x[0] - 2), 2 * x[1]}; };
  cb.constraints = [](std::span<const double> x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1}; };
  cb.jacobian = [](std::span<const double> x) { return Matrix{{2 * x[0], 2 * x[1]}}; };
  const MinimizeResult r = minimize(Vector{0.6, 0.9}, cb, NewtonConfig{1e-10, 0.25, 200});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], 0.0, 1e-8);
  for (const IterationRecord& rec : r.trace) EXPECT_LE(rec.kkt_residual, 1e-8 * (1.0 + rec.constraint_norm));
}

TEST(Minimize, TerminationBound) {
  // At a converged iterate ||g|| <= ||J|| epsilon + 1e-8.
  NewtonCallbacks cb;
  cb.gradient = [](std::span<const double> x) { return Vector{2 * (x[0] - 2), 2 * x[1]}; };
  cb.constraints = [](std::span<const double> x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1}; };
  cb.jacobian = [](std::span<const double> x) { return Matrix{{2 * x[0], 2 * x[1]}}; };
  const NewtonConfig config{0.1, 0.25, 100};
  const MinimizeResult r = minimize(Vector{0.3, 0.4}, cb, config);
  ASSERT_TRUE(r.converged);
  const double gnorm = std::abs(cb.constraints(r.x)[0]);
  const double jnorm = norm2(cb.jacobian(r.x).data());
  EXPECT_LE(gnorm, jnorm * config.epsilon + 1e-8);
}

TEST(Minimize, NonFiniteCallbackOutput) {
  NewtonCallbacks cb;
  cb.gradient = [](std::span<const double> x) { return Vector{x[0]}; };
  cb.constraints = [](std::span<const double> x) {
    return Vector{x[0] > 5 ? std::numeric_limits<double>::infinity() : x[0] - 100};
  };
  cb.jacobian = [](std::span<const double>) { return Matrix{{1}}; };
  try {
    minimize(Vector{0}, cb, NewtonConfig{});
    FAIL() << "expected NumericalBreakdown";
  } catch (const NumericalBreakdown& e) {
    EXPECT_EQ(e.iteration(), 1);
  }
}

TEST(Minimize, Deterministic) {
  NewtonCallbacks cb;
  cb.gradient = [](std::span<const double> x) { return Vector{2 * (x[0] - 2), 2 * x[1]}; };
  cb.constraints = [](std::span<const double> x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1}; };
  cb.jacobian = [](std::span<const double> x) { return Matrix{{2 * x[0], 2 * x[1]}}; };
  const MinimizeResult a = minimize(Vector{0.6, 0.9}, cb, NewtonConfig{1e-12, 0.7, 50});
  const MinimizeResult b = minimize(Vector{0.6, 0.9}, cb, NewtonConfig{1e-12, 0.7, 50});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}
