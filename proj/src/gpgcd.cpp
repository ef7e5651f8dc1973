#include "bezgcd/gpgcd.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

Formulation::Formulation(std::vector<int> degrees, int d, ColumnOrder order)
    : degrees_(std::move(degrees)), d_(d), order_(order) {
  if (degrees_.size() < 2) throw InvalidProblem("Formulation: need at least two polynomials");
  const int m = degrees_.front();
  for (int deg : degrees_)
    if (deg < 0 || deg > m) throw InvalidProblem("Formulation: degree outside [0, m]");
  if (d < 1 || d >= m) throw InvalidProblem("Formulation: need 1 <= d < m");
  split_ = column_split(m, d, order);
  offsets_.reserve(degrees_.size() + 1);
  offsets_.push_back(0);
  for (int deg : degrees_) offsets_.push_back(offsets_.back() + static_cast<std::size_t>(deg) + 1);
}

std::size_t Formulation::variable_count() const noexcept {
  return coefficient_count() + static_cast<std::size_t>(m() - d_);
}

std::size_t Formulation::constraint_count() const noexcept {
  return (degrees_.size() - 1) * static_cast<std::size_t>(m());
}

Vector Formulation::pack(const VariableVector& v) const {
  if (v.s_tilde.size() != coefficient_count() || v.y.size() != split_.basis.size())
    throw DimensionError("Formulation::pack: variable vector has the wrong shape");
  Vector x(v.s_tilde);
  x.insert(x.end(), v.y.begin(), v.y.end());
  return x;
}

VariableVector Formulation::unpack(std::span<const double> x) const {
  if (x.size() != variable_count())
    throw DimensionError("Formulation::unpack: expected " + std::to_string(variable_count()) +
                         " variables, got " + std::to_string(x.size()));
  const auto split = static_cast<std::ptrdiff_t>(coefficient_count());
  return {Vector(x.begin(), x.begin() + split), Vector(x.begin() + split, x.end())};
}

VariableVector Formulation::from_polynomials(std::span<const Polynomial> polys, Vector y) const {
  if (polys.size() != degrees_.size())
    throw DimensionError("Formulation::from_polynomials: polynomial count mismatch");
  VariableVector v;
  v.s_tilde.reserve(coefficient_count());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].degree() != degrees_[i])
      throw DimensionError("Formulation::from_polynomials: degree mismatch");
    v.s_tilde.insert(v.s_tilde.end(), polys[i].coeffs().begin(), polys[i].coeffs().end());
  }
  v.y = std::move(y);
  if (v.y.size() != split_.basis.size())
    throw DimensionError("Formulation::from_polynomials: y must have length m - d");
  return v;
}

std::vector<Polynomial> Formulation::polynomials(const VariableVector& v) const {
  if (v.s_tilde.size() != coefficient_count())
    throw DimensionError("Formulation::polynomials: coefficient count mismatch");
  std::vector<Polynomial> out;
  out.reserve(degrees_.size());
  for (std::size_t i = 0; i < degrees_.size(); ++i)
    out.emplace_back(Vector(v.s_tilde.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                            v.s_tilde.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1])));
  return out;
}

double Formulation::objective(const VariableVector& v, std::span<const double> s0) const {
  const Vector delta = subtract(v.s_tilde, s0);
  return dot(delta, delta);
}

Vector Formulation::objective_gradient(const VariableVector& v, std::span<const double> s0) const {
  Vector grad(variable_count(), 0.0);
  const Vector delta = subtract(v.s_tilde, s0);
  for (std::size_t i = 0; i < delta.size(); ++i) grad[i] = 2.0 * delta[i];
  return grad;
}

Vector Formulation::kernel_vector(std::span<const double> y) const {
  if (y.size() != split_.basis.size()) throw DimensionError("Formulation: y must have length m - d");
  Vector u(static_cast<std::size_t>(m()), 0.0);
  for (std::size_t j = 0; j < y.size(); ++j) u[static_cast<std::size_t>(split_.basis[j])] = y[j];
  u[static_cast<std::size_t>(split_.target)] = -1.0;
  return u;
}

Vector Formulation::constraints(const VariableVector& v) const {
  const std::vector<Polynomial> polys = polynomials(v);
  return bezout_stack(polys, m()).stacked() * kernel_vector(v.y);
}

Matrix Formulation::constraint_jacobian(const VariableVector& v) const {
  const std::vector<Polynomial> polys = polynomials(v);
  const int mm = m();
  const auto msz = static_cast<std::size_t>(mm);
  const Vector u = kernel_vector(v.y);
  Matrix jac(constraint_count(), variable_count());

  // Bez is bilinear, so d/df_{1p} of Bez(F_1, F_k) u is Bez(x^p, F_k) u and
  // d/df_{kp} is Bez(F_1, x^p) u.
  for (std::size_t k = 1; k < polys.size(); ++k) {
    const std::size_t row0 = (k - 1) * msz;
    for (int p = 0; p <= mm; ++p) {
      const Vector col = bezout_pair(Polynomial::basis(p, mm), polys[k], mm) * u;
      for (std::size_t i = 0; i < msz; ++i) jac(row0 + i, offsets_[0] + static_cast<std::size_t>(p)) = col[i];
    }
    for (int p = 0; p <= degrees_[k]; ++p) {
      const Vector col = bezout_pair(polys[0], Polynomial::basis(p, degrees_[k]), mm) * u;
      for (std::size_t i = 0; i < msz; ++i) jac(row0 + i, offsets_[k] + static_cast<std::size_t>(p)) = col[i];
    }
  }
  const Matrix basis = bezout_stack(polys, mm).stacked().select_columns(split_.basis);
  jac.set_block(0, coefficient_count(), basis);
  return jac;
}

Vector Formulation::initial_y(std::span<const Polynomial> polys) const {
  const BezoutStack bez = bezout_stack(polys, m());
  return lstsq(bez.stacked().select_columns(split_.basis), bez.column(split_.target));
}

void ProblemSpec::validate() const {
  if (polys.size() < 2) throw InvalidProblem("need at least two polynomials");
  const int mm = m();
  if (!(std::abs(polys.front().leading()) > 1e-12))
    throw InvalidProblem("leading coefficient of the first polynomial is numerically zero");
  int min_degree = mm;
  for (const Polynomial& p : polys) {
    if (p.degree() > mm) throw InvalidProblem("deg F_k exceeds deg F_1");
    for (double c : p.coeffs())
      if (!std::isfinite(c)) throw InvalidProblem("non-finite input coefficient");
    min_degree = std::min(min_degree, p.degree());
  }
  if (d < 1 || d >= mm || d > min_degree)
    throw InvalidProblem("GCD degree d = " + std::to_string(d) +
                         " must satisfy 1 <= d <= min deg F_i and d < m");
  config.validate();
}

double perturbation_norm(std::span<const Polynomial> a, std::span<const Polynomial> b) {
  if (a.size() != b.size()) throw DimensionError("perturbation_norm: count mismatch");
  Vector parts(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) parts[i] = norm2(sub(a[i], b[i]));
  return norm2(parts);
}

namespace {

struct Start {
  Formulation formulation;
  Vector y0;
};

std::optional<Start> try_start(const std::vector<int>& degrees, int d, ColumnOrder order,
                               std::span<const Polynomial> polys) {
  Formulation form(degrees, d, order);
  try {
    Vector y0 = form.initial_y(polys);
    return Start{std::move(form), std::move(y0)};
  } catch (const RankDeficient&) {
    return std::nullopt;
  }
}

Start choose_start(const std::vector<int>& degrees, int d, Orientation orientation,
                   std::span<const Polynomial> polys) {
  if (orientation != Orientation::Automatic) {
    const ColumnOrder order =
        orientation == Orientation::Leading ? ColumnOrder::Leading : ColumnOrder::Trailing;
    Formulation form(degrees, d, order);
    Vector y0 = form.initial_y(polys);
    return Start{std::move(form), std::move(y0)};
  }
  std::optional<Start> leading = try_start(degrees, d, ColumnOrder::Leading, polys);
  std::optional<Start> trailing = try_start(degrees, d, ColumnOrder::Trailing, polys);
  if (leading && trailing) return norm2(trailing->y0) < norm2(leading->y0) ? *trailing : *leading;
  if (leading) return *leading;
  if (trailing) return *trailing;
  throw RankDeficient("solve: Bezout basis columns are rank deficient in both column orders", -1);
}

}  // namespace

SolveResult solve(const ProblemSpec& spec) {
  spec.validate();
  const int m = spec.m();
  const int d = spec.d;
  const std::size_t n = spec.polys.size();

  std::vector<Polynomial> inputs = spec.polys;
  Vector scales(n, 1.0);
  if (spec.normalize_inputs) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = norm2(inputs[i]);
      if (s > 0.0) {
        scales[i] = s;
        inputs[i] = inputs[i].scaled(1.0 / s);
      }
    }
  }

  std::vector<int> degrees;
  degrees.reserve(n);
  for (const Polynomial& p : inputs) degrees.push_back(p.degree());

  Start start = choose_start(degrees, d, spec.orientation, inputs);
  const Formulation& form = start.formulation;

  Vector s0;
  s0.reserve(form.coefficient_count());
  for (const Polynomial& p : inputs) s0.insert(s0.end(), p.coeffs().begin(), p.coeffs().end());

  NewtonCallbacks callbacks;
  callbacks.gradient = [&](std::span<const double> x) {
    return form.objective_gradient(form.unpack(x), s0);
  };
  callbacks.constraints = [&](std::span<const double> x) { return form.constraints(form.unpack(x)); };
  callbacks.jacobian = [&](std::span<const double> x) {
    return form.constraint_jacobian(form.unpack(x));
  };

  MinimizeResult run = minimize(form.pack({s0, start.y0}), callbacks, spec.config);
  const VariableVector star = form.unpack(run.x);
  const std::vector<Polynomial> optimized = form.polynomials(star);

  SolveResult result;
  result.iterations = run.iterations;
  result.converged = run.converged;
  result.trace = std::move(run.trace);
  result.order = form.order();
  result.degenerate = !(std::abs(optimized.front().leading()) >= degenerate_leading_tolerance);
  result.constraint_residual = norm2(form.constraints(star));
  result.gcd = barnett_gcd(bezout_stack(optimized, m), d, form.order());
  result.iterate = star;

  result.cofactors.reserve(n);
  result.refined.reserve(n);
  Vector remainders(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix conv = convolution_matrix(result.gcd, inputs[i].degree() - d + 1);
    Polynomial cofactor(lstsq(conv, inputs[i].coeffs()));
    if (spec.normalize_inputs) cofactor = cofactor.scaled(scales[i]);
    Polynomial refined = mul(cofactor, result.gcd);
    remainders[i] = norm2(divrem(refined, result.gcd).remainder);
    result.cofactors.push_back(std::move(cofactor));
    result.refined.push_back(std::move(refined));
  }
  result.remainder_norm = norm2(remainders);
  result.perturbation = perturbation_norm(result.refined, spec.polys);
  return result;
}

}  // namespace bezgcd
