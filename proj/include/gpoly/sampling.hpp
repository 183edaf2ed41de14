#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gpoly/linalg.hpp"
#include "gpoly/rng.hpp"

namespace gpoly {

/// Where a point set came from: a (master_seed, stream_id) pair, or nothing
/// for externally supplied data.
struct Provenance {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// n points in R^d stored as the rows of an n×d matrix. Immutable once built.
class PointSet {
 public:
  PointSet(Matrix coords, std::optional<Provenance> provenance = std::nullopt);

  Eigen::Index n() const noexcept { return coords_.rows(); }
  Eigen::Index d() const noexcept { return coords_.cols(); }
  const Matrix& coords() const noexcept { return coords_; }
  auto point(Eigen::Index i) const { return coords_.row(i); }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  /// Largest Euclidean norm among the points (1 for an all-zero set); the
  /// length scale for numeric tolerances.
  double scale() const noexcept { return scale_; }

 private:
  Matrix coords_;
  std::optional<Provenance> provenance_;
  double scale_ = 1.0;
};

/// n·d independent standard normal coordinates, drawn row by row.
PointSet gaussian_point_set(RngStream& rng, Eigen::Index n, Eigen::Index d);

/// Uniform direction on S^{d-1} (normalised Gaussian vector).
Vector unit_direction(RngStream& rng, Eigen::Index d);

/// count standard Gaussian points in R^d conditioned on x₁ ≤ t, by rejection.
/// Requires t ≥ 0 so the acceptance rate Φ(t) is at least 1/2.
PointSet halfspace_truncated_gaussians(RngStream& rng, Eigen::Index d, double t, Eigen::Index count);

/// CSV with header x1,...,xd and one point per row at 17 significant digits.
void write_point_set_csv(std::ostream& out, const PointSet& ps);
PointSet read_point_set_csv(std::istream& in);

}  // namespace gpoly
