#include "gpoly/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "gpoly/error.hpp"
#include "gpoly/geometry.hpp"
#include "gpoly/sampling.hpp"
#include "gpoly/special.hpp"
#include "gpoly/theory.hpp"

namespace gpoly {

namespace {

constexpr std::uint64_t kBlockSize = 256;

unsigned resolve_workers(unsigned workers, std::uint64_t blocks) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(blocks, 1)));
}

void require_trials(std::uint64_t trials) {
  if (trials < 2) throw DomainError("Monte Carlo runs need at least 2 trials");
}

void require_subset_cap(int n, int d, const ResourceCaps& caps) {
  if (d < 1 || n < d) throw DomainError("need 1 <= d <= n");
  const double log_count = log_binomial(n, d);
  if (log_count > std::log(static_cast<double>(caps.max_subsets)) + 1e-9) {
    throw ResourceBoundError("C(" + std::to_string(n) + "," + std::to_string(d) + ") exceeds the enumeration cap of " +
                             std::to_string(caps.max_subsets) + " subsets");
  }
}

void require_k(int n, int d, int k) {
  if (d < 1 || n < d + 1) throw DomainError("need d >= 1 and n >= d + 1");
  if (k < 0 || k > n - d) throw DomainError("need 0 <= k <= n - d");
}

// Balanced pairwise reduction in index order.
RunningMoments tree_merge(std::vector<RunningMoments> parts) {
  while (parts.size() > 1) {
    std::vector<RunningMoments> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      parts[i].merge(parts[i + 1]);
      next.push_back(std::move(parts[i]));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

bool is_facet(const PointSet& ps, const IndexSubset& subset) {
  const SideCount c = side_counts(ps, subset, hyperplane_through(ps, subset));
  return c.above == 0 || c.below == 0;
}

IndexSubset range_subset(Eigen::Index first, Eigen::Index count) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), first);
  return IndexSubset(std::move(idx));
}

}  // namespace

RunningMoments mc_run_moments(const VectorTrial& trial, Eigen::Index width, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned workers) {
  require_trials(trials);
  if (width < 1) throw DimensionError("mc_run: observation width must be positive");

  const std::uint64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<RunningMoments> partial(blocks, RunningMoments(width));
  std::atomic<std::uint64_t> next_block{0};
  // Blocks beyond the earliest failing one are skipped; blocks before it are
  // always finished, so the reported index is the true minimum.
  std::atomic<std::uint64_t> failed_block{std::numeric_limits<std::uint64_t>::max()};
  std::mutex failure_mutex;
  std::uint64_t failed_trial = std::numeric_limits<std::uint64_t>::max();
  std::string failure_message;

  auto work = [&] {
    std::vector<double> obs(static_cast<std::size_t>(width));
    while (true) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= blocks || b > failed_block.load()) return;
      const std::uint64_t begin = b * kBlockSize;
      const std::uint64_t end = std::min(trials, begin + kBlockSize);
      RunningMoments& acc = partial[b];
      for (std::uint64_t i = begin; i < end; ++i) {
        try {
          RngStream rng(master_seed, i);
          std::fill(obs.begin(), obs.end(), 0.0);
          trial(rng, obs);
          acc.add(obs);
        } catch (const std::exception& e) {
          const std::lock_guard lock(failure_mutex);
          if (i < failed_trial) {
            failed_trial = i;
            failure_message = e.what();
          }
          std::uint64_t current = failed_block.load();
          while (b < current && !failed_block.compare_exchange_weak(current, b)) {
          }
          break;
        }
      }
    }
  };

  const unsigned n_workers = resolve_workers(workers, blocks);
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }

  if (failed_trial != std::numeric_limits<std::uint64_t>::max()) throw TrialError(failed_trial, failure_message);
  return tree_merge(std::move(partial));
}

MCEstimate mc_run(const ScalarTrial& trial, std::uint64_t trials, std::uint64_t master_seed, unsigned workers) {
  const RunningMoments m = mc_run_moments([&](RngStream& rng, std::span<double> out) { out[0] = trial(rng); }, 1,
                                          trials, master_seed, workers);
  return estimate_of(m);
}

std::vector<MCEstimate> kfacet_profile_mc(int n, int d, std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                          const ResourceCaps& caps) {
  if (d < 1 || n < d + 1) throw DomainError("need d >= 1 and n >= d + 1");
  require_subset_cap(n, d, caps);
  const Eigen::Index width = n - d + 1;
  const RunningMoments m = mc_run_moments(
      [=](RngStream& rng, std::span<double> out) {
        const KFacetProfile p = kfacet_profile(gaussian_point_set(rng, n, d));
        for (std::size_t k = 0; k < p.e.size(); ++k) out[k] = static_cast<double>(p.e[k]);
      },
      width, trials, seed, workers);
  std::vector<MCEstimate> out;
  for (Eigen::Index k = 0; k < width; ++k) out.push_back(estimate_of(m, k));
  return out;
}

MCEstimate kfacet_expectation_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                 const ResourceCaps& caps) {
  require_k(n, d, k);
  require_subset_cap(n, d, caps);
  return mc_run(
      [=](RngStream& rng) {
        return static_cast<double>(kfacet_profile(gaussian_point_set(rng, n, d)).e[static_cast<std::size_t>(k)]);
      },
      trials, seed, workers);
}

MCEstimate fixed_subset_kfacet_probability_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed,
                                              unsigned workers) {
  require_k(n, d, k);
  const IndexSubset first = range_subset(0, d);
  return mc_run(
      [=](RngStream& rng) {
        const PointSet ps = gaussian_point_set(rng, n, d);
        const SideCount c = side_counts(ps, first, hyperplane_through(ps, first));
        return (c.above == k || c.below == k) ? 1.0 : 0.0;
      },
      trials, seed, workers);
}

namespace {

int reduced_above_count(RngStream& rng, int n, int d) {
  const double y = rng.normal() / std::sqrt(static_cast<double>(d));
  int above = 0;
  for (int i = 0; i < n - d; ++i) above += rng.normal() > y;
  return above;
}

}  // namespace

MCEstimate reduced_kfacet_probability_mc(int n, int d, int k, std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers) {
  require_k(n, d, k);
  return mc_run(
      [=](RngStream& rng) {
        const int above = reduced_above_count(rng, n, d);
        return (above == k || above == n - d - k) ? 1.0 : 0.0;
      },
      trials, seed, workers);
}

std::vector<MCEstimate> reduced_kfacet_profile_mc(int n, int d, std::uint64_t trials, std::uint64_t seed,
                                                  unsigned workers) {
  if (d < 1 || n < d + 1) throw DomainError("need d >= 1 and n >= d + 1");
  const Eigen::Index width = n - d + 1;
  const RunningMoments m = mc_run_moments(
      [=](RngStream& rng, std::span<double> out) {
        const int above = reduced_above_count(rng, n, d);
        out[static_cast<std::size_t>(above)] = 1.0;
        out[static_cast<std::size_t>(n - d - above)] = 1.0;
      },
      width, trials, seed, workers);
  std::vector<MCEstimate> out;
  for (Eigen::Index k = 0; k < width; ++k) out.push_back(estimate_of(m, k));
  return out;
}

MCEstimate estranged_expectation_mc(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                    const ResourceCaps& caps) {
  if (d < 1) throw DomainError("estranged: need d >= 1");
  if (d > caps.max_estranged_d) {
    throw ResourceBoundError("estranged enumeration is capped at d = " + std::to_string(caps.max_estranged_d));
  }
  require_subset_cap(2 * d, d, caps);
  return mc_run(
      [=](RngStream& rng) {
        return static_cast<double>(estranged_pair_count(facet_set(gaussian_point_set(rng, 2 * d, d))));
      },
      trials, seed, workers);
}

MCEstimate pair_facet_probability_mc(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                     const ResourceCaps& caps) {
  if (d < 1) throw DomainError("pairprob: need d >= 1");
  if (d > caps.max_pair_d) {
    throw ResourceBoundError("pair-facet probability is capped at d = " + std::to_string(caps.max_pair_d));
  }
  const IndexSubset first = range_subset(0, d);
  const IndexSubset second = range_subset(d, d);
  return mc_run(
      [=](RngStream& rng) {
        const PointSet ps = gaussian_point_set(rng, 2 * d, d);
        return (is_facet(ps, first) && is_facet(ps, second)) ? 1.0 : 0.0;
      },
      trials, seed, workers);
}

std::vector<GrowthRow> facet_growth_table(double alpha, double r, const std::vector<int>& d_values,
                                          std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                          const ResourceCaps& caps) {
  const double base = growth_base_kfacet(alpha, r);
  std::vector<GrowthRow> rows;
  for (int d : d_values) {
    if (d < 1) throw DomainError("facet_growth_table: need d >= 1");
    const int n = std::max(d + 1, static_cast<int>(std::lround(alpha * d)));
    const int k = static_cast<int>(std::lround(r * (n - d)));
    if (log_binomial(n, d) > std::log(static_cast<double>(caps.max_subsets)) + 1e-9) continue;
    GrowthRow row;
    row.d = d;
    row.n = n;
    row.k = k;
    row.estimate = kfacet_expectation_mc(n, d, k, trials, derive_seed(seed, "growth/d=" + std::to_string(d)), workers,
                                         caps);
    row.root = std::pow(row.estimate.mean, 1.0 / d);
    row.base = base;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gpoly
