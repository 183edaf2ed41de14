#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpoly/rng.hpp"
#include "gpoly/stats.hpp"

namespace gpoly {

/// Enumeration caps. These are configuration, not constants of nature.
struct ResourceCaps {
  std::uint64_t max_subsets = 200000;
  int max_estranged_d = 7;
  int max_pair_d = 10;
};

using ScalarTrial = std::function<double(RngStream&)>;
/// Writes one observation of fixed width into `out`.
using VectorTrial = std::function<void(RngStream&, std::span<double> out)>;

/// Runs `trials` independent trials; trial i draws from stream(master_seed, i).
///
/// Trials are grouped in fixed blocks of consecutive indices, each block is
/// accumulated in index order, and block results are merged pairwise in a
/// fixed tree. The result is therefore bit-identical for any worker count.
/// workers = 0 means std::thread::hardware_concurrency(). A throwing trial
/// aborts the run with TrialError naming the lowest failing index.
RunningMoments mc_run_moments(const VectorTrial& trial, Eigen::Index width, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned workers = 0);

MCEstimate mc_run(const ScalarTrial& trial, std::uint64_t trials, std::uint64_t master_seed, unsigned workers = 0);

/// Empirical E e_k(X): full k-facet enumeration of n Gaussian points per trial.
MCEstimate kfacet_expectation_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0,
                                 const ResourceCaps& caps = {});

/// Empirical E e_k for every k = 0..n−d from the same trials.
std::vector<MCEstimate> kfacet_profile_mc(int n, int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0,
                                          const ResourceCaps& caps = {});

/// P({X₁..X_d} is a k-facet): one hyperplane per trial.
MCEstimate fixed_subset_kfacet_probability_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed,
                                              unsigned workers = 0);

/// The one-dimensional surrogate: Y ~ N(0, 1/d) against n−d standard normals;
/// success iff #{i : Y_i > Y} ∈ {k, n−d−k}.
MCEstimate reduced_kfacet_probability_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers = 0);
std::vector<MCEstimate> reduced_kfacet_profile_mc(int n, int d, std::uint64_t trials, std::uint64_t seed,
                                                  unsigned workers = 0);

/// Number of unordered estranged facet pairs of 2d Gaussian points in R^d.
MCEstimate estranged_expectation_mc(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0,
                                    const ResourceCaps& caps = {});

/// P(the first d and the last d of 2d Gaussian points are both facets).
MCEstimate pair_facet_probability_mc(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0,
                                     const ResourceCaps& caps = {});

struct GrowthRow {
  int d = 0;
  int n = 0;
  int k = 0;
  MCEstimate estimate;
  /// mean^{1/d}
  double root = 0.0;
  double base = 0.0;
};

/// Trend table of (E e_k)^{1/d} against growth_base_kfacet(alpha, r), with
/// n = round(alpha·d) and k = round(r·(n−d)). Rows whose C(n, d) exceeds the
/// cap are skipped.
std::vector<GrowthRow> facet_growth_table(double alpha, double r, const std::vector<int>& d_values,
                                          std::uint64_t trials, std::uint64_t seed, unsigned workers = 0,
                                          const ResourceCaps& caps = {});

}  // namespace gpoly
