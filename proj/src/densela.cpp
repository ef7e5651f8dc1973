#include "bezgcd/densela.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: rows and cols must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: rows and cols must be >= 1");
  if (data_.size() != rows * cols) throw DimensionError("Matrix: data length != rows * cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("Matrix: rows and cols must be >= 1");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::select_columns(std::span<const int> indices) const {
  if (indices.empty()) throw DimensionError("select_columns: empty index list");
  Matrix out(rows_, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto j = static_cast<std::size_t>(indices[k]);
    if (j >= cols_) throw DimensionError("select_columns: index out of range");
    for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, j);
  }
  return out;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& block) {
  if (row0 + block.rows() > rows_ || col0 + block.cols() > cols_)
    throw DimensionError("set_block: block does not fit");
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) (*this)(row0 + i, col0 + j) = block(i, j);
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius_norm() const noexcept { return norm2(data_); }

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: size mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: size mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) {
  // Scaled accumulation; Bezout entries can be large enough for naive squares to lose range.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double v : a) {
    const double t = v / scale;
    sum += t * t;
  }
  return scale * std::sqrt(sum);
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("subtract: size mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

LuFactorization::LuFactorization(const Matrix& a, double relative_pivot) : lu_(a), perm_(a.rows()) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("LuFactorization: matrix is not square");
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  const double threshold = relative_pivot * a.max_abs();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (best <= threshold || best == 0.0)
      throw SingularSystem("LuFactorization: pivot " + std::to_string(best) + " at column " +
                           std::to_string(k) + " below threshold");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu_(i, k) / pivot;
      lu_(i, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
    }
  }
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("LuFactorization::solve: rhs length mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu_(k, j) * x[j];
    x[k] = s / lu_(k, k);
  }
  return x;
}

Vector solve_square(const Matrix& a, std::span<const double> b) {
  if (a.cols() != a.rows()) throw DimensionError("solve_square: matrix is not square");
  if (b.size() != a.rows()) throw DimensionError("solve_square: rhs length mismatch");
  return LuFactorization(a).solve(b);
}

namespace {

// Householder reflector for column k of `m`, rows k..end. The vector is
// normalized to v_k = 1 and stored below the diagonal; returns beta with
// H = I - beta v v^T. The diagonal receives the resulting R_kk.
double reflect_column(Matrix& m, std::size_t k) {
  const std::size_t rows = m.rows();
  double scale = 0.0;
  for (std::size_t i = k; i < rows; ++i) scale = std::max(scale, std::abs(m(i, k)));
  if (scale == 0.0) return 0.0;

  double sigma = 0.0;
  for (std::size_t i = k; i < rows; ++i) {
    const double t = m(i, k) / scale;
    sigma += t * t;
  }
  const double norm = scale * std::sqrt(sigma);
  const double x0 = m(k, k);
  const double alpha = x0 >= 0.0 ? -norm : norm;
  const double v0 = x0 - alpha;
  // v = x - alpha e_k, scaled so that v_k = 1.
  double vtv = 1.0;
  for (std::size_t i = k + 1; i < rows; ++i) {
    m(i, k) /= v0;
    vtv += m(i, k) * m(i, k);
  }
  m(k, k) = alpha;
  return 2.0 / vtv;
}

void apply_reflector(Matrix& m, std::size_t k, double beta, std::size_t first_col) {
  if (beta == 0.0) return;
  const std::size_t rows = m.rows();
  for (std::size_t j = first_col; j < m.cols(); ++j) {
    double s = m(k, j);
    for (std::size_t i = k + 1; i < rows; ++i) s += m(i, k) * m(i, j);
    s *= beta;
    m(k, j) -= s;
    for (std::size_t i = k + 1; i < rows; ++i) m(i, j) -= s * m(i, k);
  }
}

void apply_reflector_to(const Matrix& qr, std::size_t k, double beta, Vector& b) {
  if (beta == 0.0) return;
  double s = b[k];
  for (std::size_t i = k + 1; i < qr.rows(); ++i) s += qr(i, k) * b[i];
  s *= beta;
  b[k] -= s;
  for (std::size_t i = k + 1; i < qr.rows(); ++i) b[i] -= s * qr(i, k);
}

int count_rank(const Matrix& qr, std::size_t steps, double rel_tol) {
  double largest = 0.0;
  for (std::size_t k = 0; k < steps; ++k) largest = std::max(largest, std::abs(qr(k, k)));
  if (largest == 0.0) return 0;
  int r = 0;
  for (std::size_t k = 0; k < steps; ++k)
    if (std::abs(qr(k, k)) >= rel_tol * largest) ++r;
  return r;
}

}  // namespace

HouseholderQr::HouseholderQr(Matrix a) : qr_(std::move(a)) {
  if (qr_.rows() < qr_.cols()) throw DimensionError("HouseholderQr: needs rows >= cols");
  beta_.resize(qr_.cols());
  for (std::size_t k = 0; k < qr_.cols(); ++k) {
    beta_[k] = reflect_column(qr_, k);
    apply_reflector(qr_, k, beta_[k], k + 1);
  }
}

int HouseholderQr::rank(double rel_tol) const { return count_rank(qr_, qr_.cols(), rel_tol); }

Vector HouseholderQr::apply_qt(std::span<const double> b) const {
  if (b.size() != qr_.rows()) throw DimensionError("HouseholderQr: rhs length mismatch");
  Vector out(b.begin(), b.end());
  for (std::size_t k = 0; k < qr_.cols(); ++k) apply_reflector_to(qr_, k, beta_[k], out);
  return out;
}

Vector HouseholderQr::solve(std::span<const double> b, double rel_tol) const {
  const int r = rank(rel_tol);
  const std::size_t n = qr_.cols();
  if (r < static_cast<int>(n))
    throw RankDeficient("lstsq: numerical rank " + std::to_string(r) + " < " + std::to_string(n), r);
  Vector qtb = apply_qt(b);
  Vector y(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = qtb[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= qr_(k, j) * y[j];
    y[k] = s / qr_(k, k);
  }
  return y;
}

Vector lstsq(const Matrix& a, std::span<const double> b) { return HouseholderQr(a).solve(b); }

PivotedQr::PivotedQr(Matrix a) : qr_(std::move(a)) {
  const std::size_t rows = qr_.rows();
  const std::size_t cols = qr_.cols();
  const std::size_t steps = std::min(rows, cols);
  beta_.resize(steps);
  perm_.resize(cols);
  std::iota(perm_.begin(), perm_.end(), 0);

  Vector colnorm(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += qr_(i, j) * qr_(i, j);
    colnorm[j] = s;
  }

  for (std::size_t k = 0; k < steps; ++k) {
    // Column norms are recomputed rather than downdated: sizes here are small
    // and the downdate formula loses accuracy exactly when rank is in question.
    std::size_t p = k;
    double best = -1.0;
    for (std::size_t j = k; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < rows; ++i) s += qr_(i, j) * qr_(i, j);
      colnorm[j] = s;
      if (s > best) {
        best = s;
        p = j;
      }
    }
    if (p != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(qr_(i, k), qr_(i, p));
      std::swap(perm_[k], perm_[p]);
    }
    beta_[k] = reflect_column(qr_, k);
    apply_reflector(qr_, k, beta_[k], k + 1);
  }
}

int PivotedQr::rank(double rel_tol) const { return count_rank(qr_, beta_.size(), rel_tol); }

Vector PivotedQr::apply_qt(std::span<const double> b) const {
  if (b.size() != qr_.rows()) throw DimensionError("PivotedQr: vector length mismatch");
  Vector out(b.begin(), b.end());
  for (std::size_t k = 0; k < beta_.size(); ++k) apply_reflector_to(qr_, k, beta_[k], out);
  return out;
}

Vector PivotedQr::apply_q(std::span<const double> b) const {
  if (b.size() != qr_.rows()) throw DimensionError("PivotedQr: vector length mismatch");
  Vector out(b.begin(), b.end());
  for (std::size_t k = beta_.size(); k-- > 0;) apply_reflector_to(qr_, k, beta_[k], out);
  return out;
}

}  // namespace bezgcd
