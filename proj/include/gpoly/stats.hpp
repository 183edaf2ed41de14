#pragma once

#include <cstdint>
#include <span>

#include "gpoly/linalg.hpp"

namespace gpoly {

/// Single-pass mean and co-moment accumulator for a fixed-width vector
/// observation (Welford updates, Chan et al. pairwise merge).
class RunningMoments {
 public:
  explicit RunningMoments(Eigen::Index width = 1);

  void add(std::span<const double> x);
  void add(double x) { add(std::span<const double>(&x, 1)); }
  void merge(const RunningMoments& other);

  Eigen::Index width() const noexcept { return mean_.size(); }
  std::uint64_t count() const noexcept { return count_; }
  double mean(Eigen::Index i = 0) const { return mean_[i]; }
  /// Unbiased sample variance; 0 with fewer than two observations.
  double variance(Eigen::Index i = 0) const { return covariance(i, i); }
  double covariance(Eigen::Index i, Eigen::Index j) const;

 private:
  std::uint64_t count_ = 0;
  Vector mean_;
  Matrix comoment_;
};

struct MCEstimate {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t trials = 0;
  double std_error = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;

  static MCEstimate from_moments(double mean, double variance, std::uint64_t trials);
  /// Multiplies the estimate (and its spread) by a constant.
  MCEstimate scaled(double factor) const;
};

MCEstimate estimate_of(const RunningMoments& m, Eigen::Index i = 0);

/// (a − b)/√(se_a² + se_b²) for independent estimates; 0 when both are exact
/// and equal, ±∞ when exact and different.
double combined_z(const MCEstimate& a, const MCEstimate& b);

/// (estimate − value)/se against an exact reference value.
double z_score(const MCEstimate& a, double value);

}  // namespace gpoly
