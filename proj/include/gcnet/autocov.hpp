#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gcnet/series.hpp"

namespace gcnet {

enum class AutocovSource { sample, population };

/// Matrix covariance sequence R(0..max_lag), R(tau) = E x(t) x(t - tau)^T.
/// Negative lags are implied through R(-tau) = R(tau)^T.
class AutocovSeq {
 public:
  AutocovSeq() = default;
  AutocovSeq(std::vector<Eigen::MatrixXd> lags, AutocovSource source);

  std::size_t max_lag() const noexcept { return lags_.size() - 1; }
  std::size_t dim() const noexcept { return lags_.empty() ? 0 : lags_[0].rows(); }
  AutocovSource source() const noexcept { return source_; }

  const Eigen::MatrixXd& operator[](std::size_t tau) const { return lags_[tau]; }

  /// R(tau) for any integer lag in [-max_lag, max_lag].
  Eigen::MatrixXd at(long tau) const;

  /// r_ii(0..max_lag).
  std::vector<double> scalar(std::size_t i) const;

  /// Sub-sequence for the ordered pair (i, j): component 0 is x_i, 1 is x_j.
  AutocovSeq pair(std::size_t i, std::size_t j) const;

  /// Truncation to lags 0..max_lag.
  AutocovSeq truncated(std::size_t max_lag) const;

  /// Block Toeplitz matrix with block (a, b) = R(b - a) for a, b in
  /// 0..blocks-1.
  Eigen::MatrixXd block_toeplitz(std::size_t blocks) const;

 private:
  std::vector<Eigen::MatrixXd> lags_;
  AutocovSource source_ = AutocovSource::sample;
};

/// Windowed ("autocorrelation method") estimate
///   R(tau) = (1/T) sum_{t = tau + 1}^{T} x(t) x(t - tau)^T,  tau = 0..max_lag.
/// Summing from tau + 1 with a 1/T normalisation keeps the block Toeplitz
/// matrix positive semidefinite. Throws std::invalid_argument if
/// max_lag >= T.
AutocovSeq estimate_autocovariance(const SeriesMatrix& x, std::size_t max_lag);

/// Smallest eigenvalue of the symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace gcnet
