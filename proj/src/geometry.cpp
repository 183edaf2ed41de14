#include "gpoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "gpoly/error.hpp"

namespace gpoly {

namespace {

constexpr double kTieTolerance = 1e-14;
constexpr double kGeneralPositionTolerance = 1e-9;
constexpr Eigen::Index kExhaustiveLimit = 16;
constexpr std::uint64_t kSampledSubsets = 10000;
constexpr std::size_t kMaxListedViolations = 100;

std::string describe(std::span<const Eigen::Index> idx) {
  std::ostringstream s;
  s << '{';
  for (std::size_t i = 0; i < idx.size(); ++i) s << (i ? "," : "") << idx[i];
  s << '}';
  return s.str();
}

Hyperplane hyperplane_of(const PointSet& ps, std::span<const Eigen::Index> idx) {
  const Eigen::Index d = ps.d();
  if (static_cast<Eigen::Index>(idx.size()) != d) {
    throw DimensionError("hyperplane_through: subset has " + std::to_string(idx.size()) + " points, need " +
                         std::to_string(d));
  }
  for (Eigen::Index i : idx) {
    if (i < 0 || i >= ps.n()) throw DimensionError("hyperplane_through: index " + std::to_string(i) + " out of range");
  }

  Hyperplane h;
  if (d == 1) {
    h.normal = Vector::Ones(1);
  } else {
    Matrix edges(d, d - 1);
    for (Eigen::Index j = 1; j < d; ++j) edges.col(j - 1) = (ps.point(idx[j]) - ps.point(idx[0])).transpose();
    Eigen::ColPivHouseholderQR<Matrix> qr(edges);
    const double largest = edges.colwise().norm().maxCoeff();
    const double smallest_pivot = qr.matrixQR().diagonal().cwiseAbs().minCoeff();
    if (!(smallest_pivot > kPivotTolerance * largest)) {
      throw DegeneracyError("hyperplane_through: points " + describe(idx) + " are affinely dependent");
    }
    const Matrix q = qr.householderQ();
    h.normal = q.col(d - 1);
  }

  double offset = 0.0;
  for (Eigen::Index i : idx) offset += ps.point(i).dot(h.normal);
  offset /= static_cast<double>(d);

  if (std::abs(offset) <= kTieTolerance * ps.scale()) {
    offset = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(h.normal[j]) > kPivotTolerance) {
        if (h.normal[j] < 0.0) h.normal = -h.normal;
        break;
      }
    }
  } else if (offset < 0.0) {
    offset = -offset;
    h.normal = -h.normal;
  }
  h.offset = offset;
  return h;
}

SideCount sides_of(const PointSet& ps, std::span<const Eigen::Index> idx, const Hyperplane& h, bool allow_on_band) {
  const double band = kOnBandTolerance * ps.scale();
  SideCount c;
  std::size_t next = 0;
  for (Eigen::Index i = 0; i < ps.n(); ++i) {
    if (next < idx.size() && idx[next] == i) {
      ++next;
      continue;
    }
    const double s = h.signed_distance(ps.point(i).transpose());
    if (s > band) {
      ++c.above;
    } else if (s < -band) {
      ++c.below;
    } else {
      if (!allow_on_band) {
        throw DegeneracyError("point " + std::to_string(i) + " lies on the hyperplane through " + describe(idx));
      }
      ++c.on;
    }
  }
  return c;
}

void require_sorted_subset(std::span<const Eigen::Index> idx) {
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] <= idx[i - 1]) throw DomainError("index subset must be strictly increasing");
  }
}

}  // namespace

IndexSubset::IndexSubset(std::vector<Eigen::Index> indices) : indices_(std::move(indices)) {
  require_sorted_subset(indices_);
  if (!indices_.empty() && indices_.front() < 0) throw DomainError("index subset must be non-negative");
}

bool IndexSubset::contains(Eigen::Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

std::uint64_t KFacetProfile::total() const { return std::accumulate(e.begin(), e.end(), std::uint64_t{0}); }

void for_each_subset(Eigen::Index n, Eigen::Index k, const std::function<void(std::span<const Eigen::Index>)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<Eigen::Index> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    fn(c);
    Eigen::Index i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (Eigen::Index j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

Hyperplane hyperplane_through(const PointSet& ps, const IndexSubset& subset) {
  return hyperplane_of(ps, subset.indices());
}

SideCount side_counts(const PointSet& ps, const IndexSubset& subset, const Hyperplane& h, bool allow_on_band) {
  return sides_of(ps, subset.indices(), h, allow_on_band);
}

KFacetProfile kfacet_profile(const PointSet& ps) {
  const Eigen::Index n = ps.n();
  const Eigen::Index d = ps.d();
  if (n < d) throw DimensionError("kfacet_profile: need n >= d");
  KFacetProfile profile{n, d, std::vector<std::uint64_t>(static_cast<std::size_t>(n - d + 1), 0), 0};
  const Eigen::Index rest = n - d;
  for_each_subset(n, d, [&](std::span<const Eigen::Index> idx) {
    const SideCount c = sides_of(ps, idx, hyperplane_of(ps, idx), false);
    ++profile.e[static_cast<std::size_t>(c.above)];
    if (c.above != rest - c.above) {
      ++profile.e[static_cast<std::size_t>(rest - c.above)];
    } else {
      ++profile.balanced;
    }
  });
  return profile;
}

FacetSet facet_set(const PointSet& ps) {
  if (ps.n() < ps.d()) throw DimensionError("facet_set: need n >= d");
  FacetSet fs{ps.n(), ps.d(), {}};
  for_each_subset(ps.n(), ps.d(), [&](std::span<const Eigen::Index> idx) {
    const SideCount c = sides_of(ps, idx, hyperplane_of(ps, idx), false);
    if (c.above == 0 || c.below == 0) fs.facets.emplace_back(std::vector<Eigen::Index>(idx.begin(), idx.end()));
  });
  return fs;
}

std::uint64_t estranged_pair_count(const FacetSet& fs) {
  const std::size_t m = fs.facets.size();
  if (m < 2) return 0;
  if (fs.n > 64) {
    std::uint64_t count = 0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        const auto& x = fs.facets[a];
        const auto& y = fs.facets[b];
        std::vector<Eigen::Index> common;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
        if (common.empty()) ++count;
      }
    }
    return count;
  }

  std::vector<std::uint64_t> masks(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (Eigen::Index i : fs.facets[a]) masks[a] |= std::uint64_t{1} << i;
  }
  if (fs.n == 2 * fs.d) {
    // Disjoint d-subsets of 2d points are complements of each other.
    const std::uint64_t all = fs.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fs.n) - 1;
    const std::unordered_set<std::uint64_t> present(masks.begin(), masks.end());
    std::uint64_t count = 0;
    for (std::uint64_t mask : masks) {
      const std::uint64_t complement = all & ~mask;
      if (mask < complement && present.contains(complement)) ++count;
    }
    return count;
  }
  std::uint64_t count = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) count += (masks[a] & masks[b]) == 0;
  }
  return count;
}

GeneralPositionReport general_position_check(const PointSet& ps, std::uint64_t seed) {
  const Eigen::Index n = ps.n();
  const Eigen::Index size = std::min(n, ps.d() + 1);
  GeneralPositionReport report;

  auto test = [&](std::span<const Eigen::Index> idx) {
    ++report.subsets_checked;
    if (size < 2) return;
    Matrix edges(ps.d(), size - 1);
    for (Eigen::Index j = 1; j < size; ++j) edges.col(j - 1) = (ps.point(idx[j]) - ps.point(idx[0])).transpose();
    const Vector lengths = edges.colwise().norm().transpose();
    bool degenerate = (lengths.array() == 0.0).any();
    if (!degenerate) {
      const Eigen::ColPivHouseholderQR<Matrix> qr(edges);
      const double ratio = qr.matrixQR().diagonal().cwiseAbs().prod() / lengths.prod();
      degenerate = !(ratio > kGeneralPositionTolerance);
    }
    if (degenerate) {
      report.passed = false;
      ++report.violation_count;
      if (report.violations.size() < kMaxListedViolations) {
        std::vector<Eigen::Index> sorted(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        report.violations.emplace_back(std::move(sorted));
      }
    }
  };

  if (n <= kExhaustiveLimit) {
    for_each_subset(n, size, test);
    return report;
  }
  report.exhaustive = false;
  RngStream rng(seed, 0);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  for (std::uint64_t s = 0; s < kSampledSubsets; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    for (Eigen::Index j = 0; j < size; ++j) {
      const auto pick = j + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n - j));
      std::swap(pool[j], pool[std::min(pick, n - 1)]);
    }
    test(std::span<const Eigen::Index>(pool.data(), static_cast<std::size_t>(size)));
  }
  return report;
}

void write_profile_csv(std::ostream& out, const KFacetProfile& profile) {
  out << "k,e_k\n";
  for (std::size_t k = 0; k < profile.e.size(); ++k) out << k << ',' << profile.e[k] << '\n';
}

void write_facets_csv(std::ostream& out, const FacetSet& fs) {
  for (Eigen::Index j = 0; j < fs.d; ++j) out << (j ? ",i" : "i") << (j + 1);
  out << '\n';
  for (const IndexSubset& f : fs.facets) {
    for (std::size_t j = 0; j < f.size(); ++j) out << (j ? "," : "") << f[j];
    out << '\n';
  }
}

}  // namespace gpoly
