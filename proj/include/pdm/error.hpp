#pragma once

#include <stdexcept>
#include <string>

namespace pdm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A denominator 1+(1-q)b vanishes, or a q-exponential with q>1 is at/past
/// its pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation at (or beyond) the point x = -1/gamma.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A trajectory left the region 1 + gamma x > 0 during a step.
class DomainExit : public DomainError {
 public:
  DomainExit(const std::string& what, double t_lo, double t_hi)
      : DomainError(what), t_lo_(t_lo), t_hi_(t_hi) {}

  double t_lo() const noexcept { return t_lo_; }
  double t_hi() const noexcept { return t_hi_; }

 private:
  double t_lo_;
  double t_hi_;
};

/// An iterative numerical procedure failed to reach its target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Energy bracket endpoints do not straddle a sign change of psi(L).
class BracketError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// Shooting converged to a state with the wrong number of interior nodes.
class NodeCountError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace pdm
