#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kreach {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, schema violations, unreadable files,
/// infeasible or unbounded initial sets, failed strategy gates.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its tolerance (pivot cap, quadrature
/// depth, integrator step underflow, Krylov dimension cap).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised by the adaptive Krylov iterations when k would exceed k_max.
class KrylovLimitError : public NumericalError {
 public:
  KrylovLimitError(const std::string& what, std::size_t k, double best_bound)
      : NumericalError(what), k_(k), best_bound_(best_bound) {}

  std::size_t k() const { return k_; }
  double best_bound() const { return best_bound_; }

 private:
  std::size_t k_;
  double best_bound_;
};

}  // namespace kreach
