#include "bezgcd/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DimensionError("Polynomial: coefficient vector must be nonempty");
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial Polynomial::zero(int degree) {
  if (degree < 0) throw DimensionError("Polynomial::zero: negative degree");
  return Polynomial(std::vector<double>(static_cast<std::size_t>(degree) + 1, 0.0));
}

Polynomial Polynomial::basis(int power, int degree) {
  if (power < 0 || power > degree) throw DimensionError("Polynomial::basis: power out of range");
  Polynomial p = zero(degree);
  p.coeffs_[static_cast<std::size_t>(power)] = 1.0;
  return p;
}

Polynomial Polynomial::reversed() const {
  return Polynomial(std::vector<double>(coeffs_.rbegin(), coeffs_.rend()));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return Polynomial(std::move(c));
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  const int deg = std::max(a.degree(), b.degree());
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (int j = 0; j <= deg; ++j) c[j] = a[j] + b[j];
  return Polynomial(std::move(c));
}

Polynomial sub(const Polynomial& a, const Polynomial& b) {
  const int deg = std::max(a.degree(), b.degree());
  std::vector<double> c(static_cast<std::size_t>(deg) + 1);
  for (int j = 0; j <= deg; ++j) c[j] = a[j] - b[j];
  return Polynomial(std::move(c));
}

Polynomial mul(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(static_cast<std::size_t>(a.degree() + b.degree()) + 1, 0.0);
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  for (std::size_t i = 0; i < ac.size(); ++i)
    for (std::size_t j = 0; j < bc.size(); ++j) c[i + j] += ac[i] * bc[j];
  return Polynomial(std::move(c));
}

double norm2(const Polynomial& a) { return norm2(a.coeffs()); }

DivRem divrem(const Polynomial& a, const Polynomial& b) {
  const double lc = b.leading();
  if (!(std::abs(lc) > tolerance::divisor))
    throw DivisorDegenerate("divrem: divisor leading coefficient " + std::to_string(lc) +
                            " is numerically zero");
  const int da = a.degree();
  const int db = b.degree();
  const int dr = std::max(db - 1, 0);
  if (da < db) {
    std::vector<double> r(static_cast<std::size_t>(dr) + 1, 0.0);
    for (int j = 0; j <= da; ++j) r[j] = a[j];
    return {Polynomial(), Polynomial(std::move(r))};
  }

  std::vector<double> work(a.coeffs().begin(), a.coeffs().end());
  std::vector<double> q(static_cast<std::size_t>(da - db) + 1, 0.0);
  for (int k = da - db; k >= 0; --k) {
    const double t = work[k + db] / lc;
    q[k] = t;
    for (int j = 0; j <= db; ++j) work[k + j] -= t * b[j];
    work[k + db] = 0.0;
  }
  std::vector<double> r(static_cast<std::size_t>(dr) + 1, 0.0);
  for (int j = 0; j < db; ++j) r[j] = work[j];
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Matrix convolution_matrix(const Polynomial& h, int ncols) {
  if (ncols < 1) throw DimensionError("convolution_matrix: ncols must be >= 1");
  const auto cols = static_cast<std::size_t>(ncols);
  Matrix c(static_cast<std::size_t>(h.degree()) + cols, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (int i = 0; i <= h.degree(); ++i) c(j + static_cast<std::size_t>(i), j) = h[i];
  return c;
}

}  // namespace bezgcd
