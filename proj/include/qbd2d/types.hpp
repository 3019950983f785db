#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qbd2d {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed argument: nonpositive rate, bad shape, bad representation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// One of the three standing modelling assumptions does not hold:
//   1 - the 2d-QBD process is irreducible,
//   2 - the interior phase chain has exactly one closed class,
//   3 - each axis chain has at most one (countably infinite) irreducible class.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(int assumption, const std::string& what)
      : Error("Assumption " + std::to_string(assumption) + " violated: " + what),
        assumption_(assumption) {}

  int assumption() const noexcept { return assumption_; }

 private:
  int assumption_;
};

// A finite generator has zero or several closed communicating classes where
// exactly one is required.
class ClosedClassError : public Error {
 public:
  ClosedClassError(std::size_t count, const std::string& what)
      : Error(what), count_(count) {}

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

// The rate-matrix iteration did not settle, or the spectral radius of R is
// numerically 1: the one-dimensional chain is null recurrent or transient.
class NearCriticalError : public Error {
 public:
  using Error::Error;
};

// A drift quantity is requested where it is not defined.
class DriftUndefined : public Error {
 public:
  using Error::Error;
};

// An internal identity that must hold failed numerically.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbd2d
