#pragma once

#include <stdexcept>
#include <string>

namespace eqconj {

// Bad input to a library routine (shape mismatch, invalid measure, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver hit its iteration cap before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// The grid is too coarse for a construction (e.g. a sampled lift is not monotone).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqconj
