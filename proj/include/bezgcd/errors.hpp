#pragma once

#include <stdexcept>
#include <string>

namespace bezgcd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or degrees do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Division by a polynomial whose leading coefficient is numerically zero.
class DivisorDegenerate : public Error {
 public:
  using Error::Error;
};

/// A square solve hit a pivot below the singularity threshold.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Least squares on a matrix without full numerical column rank.
class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& what, int rank) : Error(what), rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

/// The GCD could not be read off the Bezout matrix (degree inconsistent with the matrix).
class ExtractionFailure : public Error {
 public:
  using Error::Error;
};

/// The KKT matrix of the Newton step is singular.
class SingularKkt : public Error {
 public:
  using Error::Error;
};

/// A callback produced a non-finite value.
class NumericalBreakdown : public Error {
 public:
  NumericalBreakdown(const std::string& what, int iteration) : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// Problem data violates a documented precondition.
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bezgcd
