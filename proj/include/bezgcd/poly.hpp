#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "bezgcd/densela.hpp"

namespace bezgcd {

/// Dense univariate polynomial with real coefficients in ascending order
/// (coeffs[j] multiplies x^j).
///
/// The degree is the declared one, `coeffs.size() - 1`; it is never trimmed,
/// even when the leading slot is zero or tiny. Optimization variables are
/// fixed-length coefficient vectors and must keep their shape across iterations.
class Polynomial {
 public:
  /// The zero constant.
  Polynomial();
  /// Throws DimensionError if `coeffs` is empty.
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  /// All-zero polynomial with `degree + 1` slots.
  static Polynomial zero(int degree);
  /// x^power with `degree + 1` slots (degree >= power).
  static Polynomial basis(int power, int degree);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of x^j; zero beyond the declared degree.
  double operator[](int j) const noexcept {
    return j >= 0 && j < static_cast<int>(coeffs_.size()) ? coeffs_[j] : 0.0;
  }
  double leading() const noexcept { return coeffs_.back(); }

  /// Reversed coefficient order, x^deg p(1/x).
  Polynomial reversed() const;
  Polynomial scaled(double factor) const;

  bool operator==(const Polynomial& other) const = default;

 private:
  std::vector<double> coeffs_;
};

struct DivRem {
  Polynomial quotient;
  Polynomial remainder;
};

/// Coefficientwise sum; degree is max(deg a, deg b).
Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial sub(const Polynomial& a, const Polynomial& b);
/// Full convolution; degree is deg a + deg b.
Polynomial mul(const Polynomial& a, const Polynomial& b);
/// Euclidean norm of the coefficient vector.
double norm2(const Polynomial& a);

/// Long division a = q b + r with deg r < deg b (for deg b = 0 the remainder
/// is the zero constant). Throws DivisorDegenerate when |lc(b)| <= 1e-12.
DivRem divrem(const Polynomial& a, const Polynomial& b);

/// (deg h + ncols) x ncols banded matrix C with C vec(p) = vec(h p) for every
/// p of degree ncols - 1.
Matrix convolution_matrix(const Polynomial& h, int ncols);

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) { return add(a, b); }
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return sub(a, b); }
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return mul(a, b); }

namespace tolerance {
inline constexpr double divisor = 1e-12;
}

}  // namespace bezgcd
