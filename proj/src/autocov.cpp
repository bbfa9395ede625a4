#include "gcnet/autocov.hpp"

#include <stdexcept>
#include <utility>

namespace gcnet {

SeriesMatrix::SeriesMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw std::invalid_argument("SeriesMatrix: empty sample");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("SeriesMatrix: non-finite entry");
  }
}

AutocovSeq::AutocovSeq(std::vector<Eigen::MatrixXd> lags, AutocovSource source)
    : lags_(std::move(lags)), source_(source) {
  if (lags_.empty()) throw std::invalid_argument("AutocovSeq: no lags");
  for (const auto& r : lags_) {
    if (r.rows() != lags_[0].rows() || r.cols() != lags_[0].rows()) {
      throw std::invalid_argument("AutocovSeq: lag matrices must be square and equal-sized");
    }
  }
}

Eigen::MatrixXd AutocovSeq::at(long tau) const {
  if (tau >= 0) return lags_.at(static_cast<std::size_t>(tau));
  return lags_.at(static_cast<std::size_t>(-tau)).transpose();
}

std::vector<double> AutocovSeq::scalar(std::size_t i) const {
  std::vector<double> r(lags_.size());
  for (std::size_t tau = 0; tau < lags_.size(); ++tau) r[tau] = lags_[tau](i, i);
  return r;
}

AutocovSeq AutocovSeq::pair(std::size_t i, std::size_t j) const {
  std::vector<Eigen::MatrixXd> out(lags_.size(), Eigen::MatrixXd(2, 2));
  for (std::size_t tau = 0; tau < lags_.size(); ++tau) {
    const auto& r = lags_[tau];
    out[tau] << r(i, i), r(i, j), r(j, i), r(j, j);
  }
  return AutocovSeq(std::move(out), source_);
}

AutocovSeq AutocovSeq::truncated(std::size_t max_lag) const {
  if (max_lag > this->max_lag()) throw std::invalid_argument("AutocovSeq: truncation beyond max_lag");
  return AutocovSeq({lags_.begin(), lags_.begin() + max_lag + 1}, source_);
}

Eigen::MatrixXd AutocovSeq::block_toeplitz(std::size_t blocks) const {
  if (blocks == 0 || blocks > lags_.size()) {
    throw std::invalid_argument("block_toeplitz: need 1..max_lag+1 blocks");
  }
  const Eigen::Index d = dim();
  Eigen::MatrixXd out(d * blocks, d * blocks);
  for (std::size_t a = 0; a < blocks; ++a) {
    for (std::size_t b = 0; b < blocks; ++b) {
      out.block(a * d, b * d, d, d) = at(static_cast<long>(b) - static_cast<long>(a));
    }
  }
  return out;
}

AutocovSeq estimate_autocovariance(const SeriesMatrix& x, std::size_t max_lag) {
  const std::size_t T = x.length();
  if (max_lag >= T) {
    throw std::invalid_argument("estimate_autocovariance: max_lag must be < T");
  }
  const auto& v = x.values();
  std::vector<Eigen::MatrixXd> lags;
  lags.reserve(max_lag + 1);
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    const Eigen::Index len = static_cast<Eigen::Index>(T - tau);
    // Rows tau..T-1 (current) against rows 0..T-tau-1 (lagged).
    Eigen::MatrixXd r = v.bottomRows(len).transpose() * v.topRows(len);
    r /= static_cast<double>(T);
    if (tau == 0) r = 0.5 * (r + r.transpose()).eval();
    lags.push_back(std::move(r));
  }
  return AutocovSeq(std::move(lags), AutocovSource::sample);
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace gcnet
