#pragma once

#include <span>
#include <vector>

#include "bezgcd/densela.hpp"
#include "bezgcd/poly.hpp"

namespace bezgcd {

/// Bezout matrix of (F, G) with respect to the monomial basis:
///
///   (F(x) G(y) - F(y) G(x)) / (x - y) = sum_{i,j} b_ij x^(i-1) y^(j-1).
///
/// Entries come from the closed recurrence
///   b_ij = sum_{k=0}^{min(m-j, i-1)} (f_{j+k} g_{i-1-k} - f_{i-1-k} g_{j+k}),
/// evaluated on the upper triangle and mirrored, so the result is exactly
/// symmetric. Throws DimensionError when m < 1 or m < max(deg F, deg G).
Matrix bezout_pair(const Polynomial& f, const Polynomial& g, int m);

/// Vertical stack Bez(F1, F2), ..., Bez(F1, Fn) of m x m blocks.
class BezoutStack {
 public:
  BezoutStack(Matrix stacked, int m);

  int m() const noexcept { return m_; }
  /// Number of polynomials n (one more than the number of blocks).
  int n() const noexcept { return static_cast<int>(stacked_.rows()) / m_ + 1; }
  const Matrix& stacked() const noexcept { return stacked_; }
  /// Block Bez(F1, Fk), k = 2..n.
  Matrix block(int k) const;
  /// Stacked column j, 0-based.
  Vector column(int j) const { return stacked_.column(static_cast<std::size_t>(j)); }

 private:
  Matrix stacked_;
  int m_;
};

/// Throws DimensionError for fewer than two polynomials, deg F1 != m or deg Fk > m.
BezoutStack bezout_stack(std::span<const Polynomial> polys, int m);

/// Which m - d columns of the stacked matrix serve as the independent basis
/// when a GCD of degree d is present.
///
/// Two subsets are used:
///  - Leading:  b_1..b_{m-d} with dependent column b_{m-d+1}. A basis when
///              H(0) != 0; conditioning degrades as roots of H approach zero.
///  - Trailing: b_{d+1}..b_m with dependent column b_d. Always a basis for an
///              exact GCD; conditioning degrades as roots of H grow.
/// The two are exchanged by the reversal x -> 1/x.
enum class ColumnOrder { Leading, Trailing };

struct ColumnSplit {
  std::vector<int> basis;  // 0-based, ascending
  int target;              // 0-based dependent column used by the constraint
};

/// Throws DimensionError unless 1 <= d < m.
ColumnSplit column_split(int m, int d, ColumnOrder order);

/// Monic degree-d GCD read off the stacked Bezout matrix (Barnett).
///
/// Trailing: for i = 1..d solve min || (b_{d+1} .. b_m) c_i - b_i || and take
/// h_{i-1} = c_{i,1}, giving H = x^d + c_{d,1} x^(d-1) + ... + c_{1,1}.
/// Leading: the same relation for the reversed polynomials, i.e. b_{m+1-i}
/// expressed over b_1..b_{m-d}, reading the coefficient on b_{m-d}; the
/// reversed GCD is then flipped back and renormalized.
///
/// All d right-hand sides share one QR factorization of the basis block.
/// Throws ExtractionFailure when the basis block is rank deficient.
Polynomial barnett_gcd(const BezoutStack& bezout, int d, ColumnOrder order = ColumnOrder::Trailing);

}  // namespace bezgcd
