#pragma once

#include <stdexcept>
#include <string>

namespace spinbus {

// Bad input: out-of-range sites, wrong sector, unnormalized state, ...
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation that only makes sense for one chain parity was called with the other.
class ParityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Problem size exceeds a hard cap (site count, dense dimension).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace spinbus
