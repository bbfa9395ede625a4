#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace gcnet {

/// T x n sample of a vector process; row t is x(t)^T.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  /// Throws std::invalid_argument for an empty matrix or non-finite entries.
  explicit SeriesMatrix(Eigen::MatrixXd values);

  std::size_t length() const noexcept { return values_.rows(); }
  std::size_t dim() const noexcept { return values_.cols(); }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(std::size_t t, std::size_t i) const { return values_(t, i); }

 private:
  Eigen::MatrixXd values_;
};

}  // namespace gcnet
