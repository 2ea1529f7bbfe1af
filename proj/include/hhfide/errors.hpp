#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhfide {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. gamma(x <= 0)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A precondition stated on the problem data does not hold (e.g. L_f >= 1).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Grid too small for a stencil, or two grid functions on different grids.
class SizeError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An iteration hit its cap. `history` holds the per-iteration measure that
/// was being driven to zero (series term, Picard increment, inner residual).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// A caller-supplied certificate constant failed machine verification.
class CertificateRejected : public Error {
 public:
  CertificateRejected(const std::string& what, std::vector<std::size_t> nodes)
      : Error(what), violating_nodes_(std::move(nodes)) {}

  const std::vector<std::size_t>& violating_nodes() const noexcept {
    return violating_nodes_;
  }

 private:
  std::vector<std::size_t> violating_nodes_;
};

/// Configuration text could not be parsed; `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hhfide
