#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corestab {

/// Malformed input file or record. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Solver non-convergence, training divergence, or any non-finite result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss. `batch` is the 0-based batch index.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t batch)
      : NumericalError(what + " (batch " + std::to_string(batch) + ")"), batch_(batch) {}

  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t batch_;
};

}  // namespace corestab
