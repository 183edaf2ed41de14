#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpoly/sampling.hpp"

namespace gpoly {

/// Band half-width, relative to PointSet::scale(), inside which a point counts
/// as lying on a hyperplane.
inline constexpr double kOnBandTolerance = 1e-9;

/// Strictly increasing list of point indices.
class IndexSubset {
 public:
  IndexSubset() = default;
  /// Throws DomainError unless the indices are strictly increasing and non-negative.
  explicit IndexSubset(std::vector<Eigen::Index> indices);

  std::size_t size() const noexcept { return indices_.size(); }
  Eigen::Index operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<Eigen::Index>& indices() const noexcept { return indices_; }
  bool contains(Eigen::Index i) const;

  auto operator<=>(const IndexSubset&) const = default;

 private:
  std::vector<Eigen::Index> indices_;
};

/// {x : normal·x = offset} with a unit normal and offset ≥ 0. When the plane
/// passes through the origin the first non-zero normal coordinate is positive.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  template <typename Derived>
  double signed_distance(const Eigen::MatrixBase<Derived>& x) const {
    return x.dot(normal) - offset;
  }
};

/// Points outside the defining subset, split by side. "below" is the open side
/// normal·x < offset (the origin's side when offset > 0).
struct SideCount {
  Eigen::Index below = 0;
  Eigen::Index above = 0;
  Eigen::Index on = 0;
};

/// e[k] = number of k-facets, k = 0..n−d.
struct KFacetProfile {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  std::vector<std::uint64_t> e;
  /// d-subsets with (n−d)/2 points on each side; each is counted once in e.
  std::uint64_t balanced = 0;

  std::uint64_t total() const;
};

/// The 0-facets: d-subsets with every other point on one side.
struct FacetSet {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  std::vector<IndexSubset> facets;

  std::size_t size() const noexcept { return facets.size(); }
};

/// Affine hull of a d-subset. Throws DegeneracyError when the points are
/// affinely dependent at the pivot tolerance.
Hyperplane hyperplane_through(const PointSet& ps, const IndexSubset& subset);

/// Classifies every point outside `subset` against `h`. Throws DegeneracyError
/// if a point lands within kOnBandTolerance·scale of the plane, unless
/// allow_on_band is set, in which case such points are tallied in `on`.
SideCount side_counts(const PointSet& ps, const IndexSubset& subset, const Hyperplane& h, bool allow_on_band = false);

/// Exhaustive k-facet profile over all C(n, d) subsets.
KFacetProfile kfacet_profile(const PointSet& ps);

FacetSet facet_set(const PointSet& ps);

/// Unordered pairs of facets with disjoint vertex sets.
std::uint64_t estranged_pair_count(const FacetSet& fs);

struct GeneralPositionReport {
  bool passed = true;
  /// True when every min(n, d+1)-subset was tested; false when sampled.
  bool exhaustive = true;
  std::uint64_t subsets_checked = 0;
  std::uint64_t violation_count = 0;
  /// At most 100 offending subsets.
  std::vector<IndexSubset> violations;
};

/// Affine independence of every min(n, d+1)-subset for n ≤ 16, otherwise of
/// 10⁴ random ones drawn from stream (seed, 0). A subset fails when the ratio
/// of its simplex volume to the product of its edge lengths from the first
/// point is at most 1e-9.
GeneralPositionReport general_position_check(const PointSet& ps, std::uint64_t seed = 0);

/// Calls fn for every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(Eigen::Index n, Eigen::Index k, const std::function<void(std::span<const Eigen::Index>)>& fn);

void write_profile_csv(std::ostream& out, const KFacetProfile& profile);
void write_facets_csv(std::ostream& out, const FacetSet& fs);

}  // namespace gpoly
