#include "gpoly/stats.hpp"

#include <cmath>
#include <limits>

#include "gpoly/error.hpp"

namespace gpoly {

RunningMoments::RunningMoments(Eigen::Index width) : mean_(Vector::Zero(width)), comoment_(Matrix::Zero(width, width)) {
  if (width < 1) throw DimensionError("RunningMoments: width must be positive");
}

void RunningMoments::add(std::span<const double> x) {
  if (static_cast<Eigen::Index>(x.size()) != width()) throw DimensionError("RunningMoments::add: width mismatch");
  const Eigen::Map<const Vector> v(x.data(), width());
  ++count_;
  const Vector delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  comoment_ += delta * (v - mean_).transpose();
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.width() != width()) throw DimensionError("RunningMoments::merge: width mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(count_);
  const auto nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const Vector delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  comoment_ += other.comoment_ + delta * delta.transpose() * (na * nb / n);
  count_ += other.count_;
}

double RunningMoments::covariance(Eigen::Index i, Eigen::Index j) const {
  if (count_ < 2) return 0.0;
  // The Welford outer product is only symmetric up to rounding.
  return 0.5 * (comoment_(i, j) + comoment_(j, i)) / static_cast<double>(count_ - 1);
}

MCEstimate MCEstimate::from_moments(double mean, double variance, std::uint64_t trials) {
  MCEstimate e;
  e.mean = mean;
  e.variance = variance;
  e.trials = trials;
  e.std_error = trials > 0 ? std::sqrt(variance / static_cast<double>(trials)) : 0.0;
  e.ci95_lo = mean - 1.96 * e.std_error;
  e.ci95_hi = mean + 1.96 * e.std_error;
  return e;
}

MCEstimate MCEstimate::scaled(double factor) const {
  return from_moments(mean * factor, variance * factor * factor, trials);
}

MCEstimate estimate_of(const RunningMoments& m, Eigen::Index i) {
  return MCEstimate::from_moments(m.mean(i), m.variance(i), m.count());
}

double combined_z(const MCEstimate& a, const MCEstimate& b) {
  const double diff = a.mean - b.mean;
  const double se = std::hypot(a.std_error, b.std_error);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / se;
}

double z_score(const MCEstimate& a, double value) {
  const double diff = a.mean - value;
  if (a.std_error == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / a.std_error;
}

}  // namespace gpoly
