#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mplex {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong in mplex" catch this one.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad sample count, unknown layer,
// malformed configuration, ...).
class precondition_error : public error {
 public:
  using error::error;
};

// Malformed input data. `line()` is 1-based and counts the header line.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Two graphs cannot be put on a common node basis.
class alignment_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

// A statistic is undefined on the given input (zero variance, too few nodes).
class degenerate_error : public error {
 public:
  using error::error;
};

// An iterative solver stopped before meeting its tolerance.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double best_residual, std::size_t iterations)
      : error(what + " (best residual " + std::to_string(best_residual) + " after " +
              std::to_string(iterations) + " iterations)"),
        best_residual_(best_residual),
        iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  std::size_t iterations_;
};

}  // namespace mplex
