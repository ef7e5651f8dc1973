#pragma once

// Dense real matrix kernels: LU solve, Householder least squares and a
// column-pivoted QR used for rank-revealing projections.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace bezgcd {

using Vector = std::vector<double>;

namespace tolerance {
/// Relative pivot threshold of solve_square, against the largest |A_ij|.
inline constexpr double pivot = 1e-12;
/// Relative rank threshold on triangular-factor diagonals, against the largest one.
inline constexpr double rank = 1e-10;
}  // namespace tolerance

/// Row-major dense matrix with at least one row and one column.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;

  Matrix transpose() const;
  /// Columns listed in `indices`, in that order.
  Matrix select_columns(std::span<const int> indices) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& block);

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator*(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// a - b, elementwise.
Vector subtract(std::span<const double> a, std::span<const double> b);

/// LU factorization with partial pivoting, P A = L U.
/// Throws SingularSystem when a pivot falls below relative_pivot * max|A_ij|.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& a, double relative_pivot = tolerance::pivot);

  std::size_t size() const noexcept { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A x = b by LU with partial pivoting.
Vector solve_square(const Matrix& a, std::span<const double> b);

/// Householder QR of a tall matrix (rows >= cols), kept in compact form so that
/// several right-hand sides can share one factorization.
class HouseholderQr {
 public:
  explicit HouseholderQr(Matrix a);

  std::size_t rows() const noexcept { return qr_.rows(); }
  std::size_t cols() const noexcept { return qr_.cols(); }

  /// Number of |R_ii| at or above rel_tol * max |R_ii|.
  int rank(double rel_tol = tolerance::rank) const;

  /// Least-squares solution of min ||A y - b||. Throws RankDeficient when
  /// rank(rel_tol) < cols.
  Vector solve(std::span<const double> b, double rel_tol = tolerance::rank) const;

  /// Q^T b.
  Vector apply_qt(std::span<const double> b) const;

 private:
  Matrix qr_;
  Vector beta_;
};

/// min ||A y - b||_2 through HouseholderQr.
Vector lstsq(const Matrix& a, std::span<const double> b);

/// Householder QR with column pivoting, A P = Q R. Works for any shape; the
/// leading diagonal of R is non-increasing in magnitude, which makes it rank
/// revealing in practice.
class PivotedQr {
 public:
  explicit PivotedQr(Matrix a);

  std::size_t rows() const noexcept { return qr_.rows(); }
  std::size_t cols() const noexcept { return qr_.cols(); }
  std::size_t steps() const noexcept { return beta_.size(); }

  int rank(double rel_tol) const;
  /// Column of A that landed in position k.
  int permutation(std::size_t k) const noexcept { return perm_[k]; }
  /// Entry of the upper-trapezoidal factor (i <= j).
  double r(std::size_t i, std::size_t j) const noexcept { return qr_(i, j); }

  /// Q b for b of length rows().
  Vector apply_q(std::span<const double> b) const;
  /// Q^T b for b of length rows().
  Vector apply_qt(std::span<const double> b) const;

 private:
  Matrix qr_;
  Vector beta_;
  std::vector<int> perm_;
};

}  // namespace bezgcd
