#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pxflow {

/// Base class for every error thrown by pxflow.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands were sampled on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exponent profile produced p <= 1 at some node.
class InvalidExponent : public InvalidArgument {
 public:
  InvalidExponent(std::size_t node, double value);
  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_;
  double value_;
};

/// Iterative solve gave up; carries the last bracket.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper);
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Non-finite values appeared in the state.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, long step);
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class CflViolation : public Error {
 public:
  CflViolation(const std::string& what, double courant);
  double courant() const noexcept { return courant_; }

 private:
  double courant_;
};

/// An audit needs data that was not recorded (e.g. spectra).
class MissingData : public Error {
 public:
  using Error::Error;
};

/// Smallness hypothesis on the initial data is violated.
class SmallDataViolation : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace pxflow
