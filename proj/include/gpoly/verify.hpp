#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpoly/stats.hpp"

namespace gpoly {

/// One simulation-vs-theory check.
///
/// Statistical checks carry an estimate and pass iff |z| ≤ threshold.
/// Inequality and deterministic checks carry `exact_condition` instead.
struct VerificationReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double theory = 0.0;
  std::optional<MCEstimate> estimate;
  std::optional<double> z;
  double threshold = 3.0;
  std::optional<bool> exact_condition;
  bool passed = false;
  /// Secondary numbers (additional z-scores, reference values, tables).
  std::vector<std::pair<std::string, double>> details;
  std::string note;
};

enum class BlaschkeDistribution { Gaussian, UniformCube };
enum class LogconcaveFamily { Uniform, Gaussian, TruncatedGaussian, Laplace };

const char* to_string(BlaschkeDistribution dist);
const char* to_string(LogconcaveFamily family);

/// E[vol²] of a (d+1)-point simplex against (d+1)/d! · det cov.
VerificationReport verify_blaschke(int d, std::uint64_t trials, std::uint64_t seed, BlaschkeDistribution dist,
                                   unsigned workers = 0);

/// Mean Gaussian simplex volume against the closed form.
VerificationReport verify_simplex_volume(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

/// Mean volume of the simplex on d truncated Gaussian points in R^{d−1};
/// passes iff mean + 3 SE ≥ truncated_simplex_lower_bound(d).
VerificationReport verify_truncated_bound(int d, double t, std::uint64_t trials, std::uint64_t seed,
                                          unsigned workers = 0);

/// Ratio E|X|/√(E X²) for a centred logconcave family; passes iff the ratio
/// minus 3 delta-method SE is at least 1/8.
VerificationReport verify_logconcave_moment(LogconcaveFamily family, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers = 0);

/// E W² and E W⁴ of the dot product of two uniform directions against
/// quadrature of the density. z is the larger |z| of the two moments.
VerificationReport verify_dot_density(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

/// (∫φ^p)^{1/p} for each p, against the closed form and the limit (2π)^{−1/2}.
/// Passes iff the values increase, match the closed form within 1e-9
/// relative, and the last lies within 0.01 of the limit.
VerificationReport verify_lp_limit(const std::vector<double>& p_values);

/// Exact, full-dimensional and reduced k-facet probabilities for one (d, n, k),
/// as three pairwise reports.
std::vector<VerificationReport> verify_kfacet_triangulation(int d, int n, int k, std::uint64_t full_trials,
                                                            std::uint64_t reduced_trials, std::uint64_t seed,
                                                            unsigned workers = 0);

/// Estranged pair count against ½·C(2d,d)·P(pair) from an independent run.
VerificationReport verify_estranged_consistency(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"blaschke", "simplex",  "truncated", "logconcave",
                                                 "dotdensity", "lp", "triangulation", "estranged"};
  return names;
}

/// Runs a named suite ("all" runs every suite in suite_names() order). Each
/// check draws from a seed derived from `seed` and its own name.
std::vector<VerificationReport> run_suite(const std::string& suite, std::uint64_t seed, unsigned workers = 0);

}  // namespace gpoly
