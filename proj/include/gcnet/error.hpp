#pragma once

#include <stdexcept>
#include <string>

namespace gcnet {

/// Raised when a recursion or solver meets numerically non-PSD or singular
/// input (reflection coefficient >= 1, singular error covariance, ...).
class DegenerateError : public std::runtime_error {
 public:
  DegenerateError(const std::string& what, std::size_t order)
      : std::runtime_error(what), order_(order) {}

  std::size_t order() const noexcept { return order_; }

 private:
  std::size_t order_;
};

/// Malformed external input (CSV, JSON, edge lists). Row and column are
/// 1-based; zero means "not applicable".
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : std::runtime_error(what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// The model is not stable (companion spectral radius too close to 1).
class UnstableModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gcnet
