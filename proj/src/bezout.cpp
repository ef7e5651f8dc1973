#include "bezgcd/bezout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

Matrix bezout_pair(const Polynomial& f, const Polynomial& g, int m) {
  if (m < 1) throw DimensionError("bezout_pair: m must be >= 1");
  if (f.degree() > m || g.degree() > m)
    throw DimensionError("bezout_pair: m = " + std::to_string(m) + " below operand degree");

  const auto size = static_cast<std::size_t>(m);
  Matrix b(size, size);
  // 0-based: b(i, j) = sum_{k=0}^{min(m-1-j, i)} f[j+1+k] g[i-k] - f[i-k] g[j+1+k].
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const int top = std::min(m - 1 - j, i);
      double s = 0.0;
      for (int k = 0; k <= top; ++k) s += f[j + 1 + k] * g[i - k] - f[i - k] * g[j + 1 + k];
      b(i, j) = s;
      b(j, i) = s;
    }
  }
  return b;
}

BezoutStack::BezoutStack(Matrix stacked, int m) : stacked_(std::move(stacked)), m_(m) {
  if (m < 1 || stacked_.cols() != static_cast<std::size_t>(m) ||
      stacked_.rows() % static_cast<std::size_t>(m) != 0)
    throw DimensionError("BezoutStack: stacked matrix is not a column of m x m blocks");
}

Matrix BezoutStack::block(int k) const {
  if (k < 2 || k > n()) throw DimensionError("BezoutStack::block: k out of range");
  const auto size = static_cast<std::size_t>(m_);
  const std::size_t row0 = static_cast<std::size_t>(k - 2) * size;
  Matrix out(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) out(i, j) = stacked_(row0 + i, j);
  return out;
}

BezoutStack bezout_stack(std::span<const Polynomial> polys, int m) {
  if (polys.size() < 2) throw DimensionError("bezout_stack: need at least two polynomials");
  if (polys[0].degree() != m)
    throw DimensionError("bezout_stack: first polynomial must have degree m");
  const auto size = static_cast<std::size_t>(m);
  Matrix stacked((polys.size() - 1) * size, size);
  for (std::size_t k = 1; k < polys.size(); ++k) {
    if (polys[k].degree() > m) throw DimensionError("bezout_stack: polynomial degree exceeds m");
    stacked.set_block((k - 1) * size, 0, bezout_pair(polys[0], polys[k], m));
  }
  return BezoutStack(std::move(stacked), m);
}

ColumnSplit column_split(int m, int d, ColumnOrder order) {
  if (d < 1 || d >= m)
    throw DimensionError("column_split: need 1 <= d < m (d = " + std::to_string(d) +
                         ", m = " + std::to_string(m) + ")");
  ColumnSplit split;
  split.basis.resize(static_cast<std::size_t>(m - d));
  if (order == ColumnOrder::Leading) {
    std::iota(split.basis.begin(), split.basis.end(), 0);
    split.target = m - d;
  } else {
    std::iota(split.basis.begin(), split.basis.end(), d);
    split.target = d - 1;
  }
  return split;
}

Polynomial barnett_gcd(const BezoutStack& bezout, int d, ColumnOrder order) {
  const int m = bezout.m();
  const ColumnSplit split = column_split(m, d, order);
  const Matrix& stacked = bezout.stacked();
  if (stacked.rows() < split.basis.size())
    throw ExtractionFailure("barnett_gcd: fewer rows than basis columns");

  const HouseholderQr qr(stacked.select_columns(split.basis));
  if (qr.rank() < m - d)
    throw ExtractionFailure("barnett_gcd: basis columns have numerical rank " +
                            std::to_string(qr.rank()) + " < m - d = " + std::to_string(m - d));

  std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
  c[static_cast<std::size_t>(d)] = 1.0;
  for (int i = 1; i <= d; ++i) {
    if (order == ColumnOrder::Trailing) {
      const Vector coef = qr.solve(stacked.column(static_cast<std::size_t>(i - 1)));
      c[static_cast<std::size_t>(i - 1)] = coef.front();
    } else {
      const Vector coef = qr.solve(stacked.column(static_cast<std::size_t>(m - i)));
      c[static_cast<std::size_t>(i - 1)] = coef.back();
    }
  }
  if (order == ColumnOrder::Trailing) return Polynomial(std::move(c));

  // c holds the monic reversal G(x) = x^d H(1/x) / h_0; flip and renormalize.
  const double g0 = c.front();
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (!(std::abs(g0) > tolerance::rank * scale))
    throw ExtractionFailure("barnett_gcd: reversed GCD has a vanishing constant term");
  std::vector<double> h(c.rbegin(), c.rend());
  for (double& v : h) v /= g0;
  h.back() = 1.0;
  return Polynomial(std::move(h));
}

}  // namespace bezgcd
