#include "gpoly/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <string>

#include "gpoly/error.hpp"
#include "gpoly/experiments.hpp"
#include "gpoly/linalg.hpp"
#include "gpoly/quadrature.hpp"
#include "gpoly/sampling.hpp"
#include "gpoly/special.hpp"
#include "gpoly/theory.hpp"

namespace gpoly {

namespace {

constexpr double kZThreshold = 3.0;
constexpr std::uint64_t kSuiteTrials = 100000;
constexpr std::uint64_t kReducedTrials = 1000000;
constexpr std::uint64_t kEstrangedTrials = 200000;

double factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

VerificationReport z_report(std::string name, double theory, const MCEstimate& est) {
  VerificationReport r;
  r.name = std::move(name);
  r.theory = theory;
  r.estimate = est;
  r.z = z_score(est, theory);
  r.threshold = kZThreshold;
  r.passed = std::abs(*r.z) <= kZThreshold;
  return r;
}

std::string tag(const std::string& base, std::initializer_list<std::pair<const char*, double>> params) {
  std::string s = base;
  for (const auto& [key, value] : params) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "/%s=%.17g", key, value);
    s += buf;
  }
  return s;
}

double sample_logconcave(LogconcaveFamily family, RngStream& rng) {
  switch (family) {
    case LogconcaveFamily::Uniform:
      return 2.0 * rng.uniform() - 1.0;
    case LogconcaveFamily::Gaussian:
      return rng.normal();
    case LogconcaveFamily::TruncatedGaussian:
      // N(0,1) conditioned on x ≤ 0, centred by its mean −√(2/π).
      return -std::abs(rng.normal()) + std::sqrt(2.0 / kPi);
    case LogconcaveFamily::Laplace: {
      const double u = rng.uniform_open() - 0.5;
      return -std::copysign(std::log1p(-2.0 * std::abs(u)), u);
    }
  }
  throw DomainError("unknown logconcave family");
}

/// Closed form (or quadrature) of E|X|/√(E X²) for the centred family.
double logconcave_reference_ratio(LogconcaveFamily family) {
  switch (family) {
    case LogconcaveFamily::Uniform:
      return std::sqrt(3.0) / 2.0;
    case LogconcaveFamily::Gaussian:
      return std::sqrt(2.0 / kPi);
    case LogconcaveFamily::Laplace:
      return 1.0 / std::sqrt(2.0);
    case LogconcaveFamily::TruncatedGaussian: {
      const double m = std::sqrt(2.0 / kPi);
      const double abs_mean =
          integrate_1d([m](double z) { return std::abs(z - m) * 2.0 * std_normal_pdf(z); }, 0.0, m, 1e-12).value +
          integrate_1d([m](double z) { return (z - m) * 2.0 * std_normal_pdf(z); }, m, 12.0, 1e-12).value;
      return abs_mean / std::sqrt(1.0 - 2.0 / kPi);
    }
  }
  throw DomainError("unknown logconcave family");
}

}  // namespace

const char* to_string(BlaschkeDistribution dist) {
  return dist == BlaschkeDistribution::Gaussian ? "gaussian" : "uniform-cube";
}

const char* to_string(LogconcaveFamily family) {
  switch (family) {
    case LogconcaveFamily::Uniform:
      return "uniform";
    case LogconcaveFamily::Gaussian:
      return "gaussian";
    case LogconcaveFamily::TruncatedGaussian:
      return "truncated-gaussian";
    case LogconcaveFamily::Laplace:
      return "laplace";
  }
  return "?";
}

VerificationReport verify_blaschke(int d, std::uint64_t trials, std::uint64_t seed, BlaschkeDistribution dist,
                                   unsigned workers) {
  if (d < 1 || d > 6) throw DomainError("verify_blaschke: need 1 <= d <= 6");
  const bool gaussian = dist == BlaschkeDistribution::Gaussian;
  const MCEstimate est = mc_run(
      [=](RngStream& rng) {
        Matrix pts(d, d + 1);
        for (int j = 0; j <= d; ++j) {
          for (int i = 0; i < d; ++i) pts(i, j) = gaussian ? rng.normal() : rng.uniform();
        }
        const double v = simplex_volume(pts);
        return v * v;
      },
      trials, seed, workers);
  const double det_cov = gaussian ? 1.0 : std::pow(1.0 / 12.0, d);
  VerificationReport r = z_report(std::string("blaschke/") + to_string(dist) + "/d=" + std::to_string(d),
                                  (d + 1.0) / factorial(d) * det_cov, est);
  r.params = {{"d", d}, {"trials", static_cast<double>(trials)}};
  r.details = {{"det_cov", det_cov}, {"relative_error", est.mean / r.theory - 1.0}};
  return r;
}

VerificationReport verify_simplex_volume(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  const SimplexVolumeFormula f = gaussian_simplex_expected_volume(d);
  const MCEstimate est = mc_run(
      [=](RngStream& rng) {
        Matrix pts(d, d + 1);
        for (int j = 0; j <= d; ++j) {
          for (int i = 0; i < d; ++i) pts(i, j) = rng.normal();
        }
        return simplex_volume(pts);
      },
      trials, seed, workers);
  VerificationReport r = z_report("simplex/d=" + std::to_string(d), f.value, est);
  r.params = {{"d", d}, {"trials", static_cast<double>(trials)}};
  r.details = {{"asymptotic", f.asymptotic}, {"relative_error", est.mean / f.value - 1.0}};
  return r;
}

VerificationReport verify_truncated_bound(int d, double t, std::uint64_t trials, std::uint64_t seed,
                                          unsigned workers) {
  if (d < 2 || d > 8) throw DomainError("verify_truncated_bound: need 2 <= d <= 8");
  if (!(t >= 0.0)) throw DomainError("verify_truncated_bound: need t >= 0");
  const MCEstimate est = mc_run(
      [=](RngStream& rng) {
        const PointSet ps = halfspace_truncated_gaussians(rng, d - 1, t, d);
        return simplex_volume(ps.coords().transpose());
      },
      trials, seed, workers);
  VerificationReport r;
  char name[64];
  std::snprintf(name, sizeof name, "truncated/d=%d/t=%g", d, t);
  r.name = name;
  r.params = {{"d", d}, {"t", t}, {"trials", static_cast<double>(trials)}};
  r.theory = truncated_simplex_lower_bound(d);
  r.estimate = est;
  r.exact_condition = est.mean + kZThreshold * est.std_error >= r.theory;
  r.passed = *r.exact_condition;
  r.details = {{"mean_over_bound", est.mean / r.theory}};
  r.note = "mean + 3 SE >= lower bound";
  return r;
}

VerificationReport verify_logconcave_moment(LogconcaveFamily family, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers) {
  const RunningMoments m = mc_run_moments(
      [=](RngStream& rng, std::span<double> out) {
        const double x = sample_logconcave(family, rng);
        out[0] = std::abs(x);
        out[1] = x * x;
      },
      2, trials, seed, workers);
  const double a = m.mean(0);
  const double b = m.mean(1);
  const double ratio = a / std::sqrt(b);
  // Delta method for g(a, b) = a/√b.
  const double ga = 1.0 / std::sqrt(b);
  const double gb = -0.5 * a / (b * std::sqrt(b));
  const double var = ga * ga * m.variance(0) + 2.0 * ga * gb * m.covariance(0, 1) + gb * gb * m.variance(1);
  const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(m.count()));

  VerificationReport r;
  r.name = std::string("logconcave/") + to_string(family);
  r.params = {{"trials", static_cast<double>(trials)}};
  r.theory = 1.0 / 8.0;
  r.estimate = MCEstimate::from_moments(ratio, var, m.count());
  r.estimate->std_error = se;
  r.exact_condition = ratio - kZThreshold * se >= r.theory;
  r.passed = *r.exact_condition;
  const double reference = logconcave_reference_ratio(family);
  r.details = {{"reference_ratio", reference}, {"z_vs_reference", se > 0.0 ? (ratio - reference) / se : 0.0}};
  r.note = "ratio - 3 SE >= 1/8";
  return r;
}

VerificationReport verify_dot_density(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (d < 2) throw DomainError("verify_dot_density: need d >= 2");
  const RunningMoments m = mc_run_moments(
      [=](RngStream& rng, std::span<double> out) {
        const Vector a = unit_direction(rng, d);
        const Vector b = unit_direction(rng, d);
        const double w = a.dot(b);
        out[0] = w * w;
        out[1] = w * w * w * w;
      },
      2, trials, seed, workers);
  const double m2 = dot_density_moment(d, 2);
  const double m4 = dot_density_moment(d, 4);
  const MCEstimate e2 = estimate_of(m, 0);
  const MCEstimate e4 = estimate_of(m, 1);
  const double z2 = z_score(e2, m2);
  const double z4 = z_score(e4, m4);

  VerificationReport r;
  r.name = "dotdensity/d=" + std::to_string(d);
  r.params = {{"d", d}, {"trials", static_cast<double>(trials)}};
  r.theory = m2;
  r.estimate = e2;
  r.z = std::abs(z2) >= std::abs(z4) ? z2 : z4;
  r.threshold = kZThreshold;
  r.passed = std::abs(z2) <= kZThreshold && std::abs(z4) <= kZThreshold;
  r.details = {{"second_moment_theory", m2}, {"second_moment_mean", e2.mean}, {"second_moment_z", z2},
               {"fourth_moment_theory", m4}, {"fourth_moment_mean", e4.mean}, {"fourth_moment_z", z4}};
  return r;
}

VerificationReport verify_lp_limit(const std::vector<double>& p_values) {
  if (p_values.empty()) throw DomainError("verify_lp_limit: need at least one p");
  const double limit = kInvSqrt2Pi;
  VerificationReport r;
  r.name = "lp_limit";
  r.theory = limit;
  bool ok = true;
  double previous = 0.0;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const double p = p_values[i];
    const double value = normal_lp_norm(p);
    const double closed = kInvSqrt2Pi * std::pow(2.0 * kPi / p, 1.0 / (2.0 * p));
    char key[64];
    std::snprintf(key, sizeof key, "p=%g", p);
    r.params.emplace_back(key, p);
    r.details.emplace_back(std::string(key) + "/value", value);
    r.details.emplace_back(std::string(key) + "/closed_form", closed);
    ok = ok && std::abs(value - closed) <= 1e-9 * closed;
    if (i > 0) ok = ok && value > previous;
    ok = ok && value <= limit;
    previous = value;
  }
  r.details.emplace_back("gap_at_last", limit - previous);
  ok = ok && limit - previous <= 0.01;
  r.exact_condition = ok;
  r.passed = ok;
  r.note = "increasing, matches closed form, last within 0.01 of the sup norm";
  return r;
}

std::vector<VerificationReport> verify_kfacet_triangulation(int d, int n, int k, std::uint64_t full_trials,
                                                            std::uint64_t reduced_trials, std::uint64_t seed,
                                                            unsigned workers) {
  const double exact = kfacet_probability_exact(KFacetFormulaInputs(n, d, k));
  const std::string base = "triangulation/d=" + std::to_string(d) + "/n=" + std::to_string(n) + "/k=" + std::to_string(k);
  const MCEstimate full =
      fixed_subset_kfacet_probability_mc(n, d, k, full_trials, derive_seed(seed, base + "/full"), workers);
  const MCEstimate reduced =
      reduced_kfacet_probability_mc(n, d, k, reduced_trials, derive_seed(seed, base + "/reduced"), workers);
  const std::vector<std::pair<std::string, double>> params = {{"d", d}, {"n", n}, {"k", k}};

  std::vector<VerificationReport> out;
  out.push_back(z_report(base + "/exact-vs-full", exact, full));
  out.push_back(z_report(base + "/exact-vs-reduced", exact, reduced));
  VerificationReport cross;
  cross.name = base + "/full-vs-reduced";
  cross.theory = reduced.mean;
  cross.estimate = full;
  cross.z = combined_z(full, reduced);
  cross.threshold = kZThreshold;
  cross.passed = std::abs(*cross.z) <= kZThreshold;
  cross.details = {{"reduced_mean", reduced.mean}, {"reduced_se", reduced.std_error}};
  cross.note = "combined standard error of two independent estimates";
  out.push_back(cross);
  for (VerificationReport& r : out) r.params = params;
  return out;
}

VerificationReport verify_estranged_consistency(int d, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  const std::string base = "estranged/d=" + std::to_string(d);
  const MCEstimate count = estranged_expectation_mc(d, trials, derive_seed(seed, base + "/count"), workers);
  const MCEstimate pair = pair_facet_probability_mc(d, trials, derive_seed(seed, base + "/pair"), workers);
  const double half_binom = 0.5 * static_cast<double>(binomial(2 * d, d));
  const MCEstimate predicted = pair.scaled(half_binom);

  VerificationReport r;
  r.name = base;
  r.params = {{"d", d}, {"trials", static_cast<double>(trials)}};
  r.theory = predicted.mean;
  r.estimate = count;
  r.z = combined_z(count, predicted);
  r.threshold = kZThreshold;
  r.passed = std::abs(*r.z) <= kZThreshold;
  r.details = {{"pair_probability", pair.mean},
               {"pair_probability_se", pair.std_error},
               {"count_root", std::pow(count.mean, 1.0 / d)},
               {"pair_root", std::pow(pair.mean, 1.0 / d)},
               {"four_c_pair", 4.0 * estranged_constant_reduced().value}};
  r.note = "E N against C(2d,d)/2 * P(pair)";
  return r;
}

std::vector<VerificationReport> run_suite(const std::string& suite, std::uint64_t seed, unsigned workers) {
  std::vector<VerificationReport> out;
  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw DomainError("unknown verification suite '" + suite + "'");
  }

  if (want("blaschke")) {
    for (auto dist : {BlaschkeDistribution::Gaussian, BlaschkeDistribution::UniformCube}) {
      for (int d = 1; d <= 5; ++d) {
        const std::string name = std::string("blaschke/") + to_string(dist) + "/d=" + std::to_string(d);
        out.push_back(verify_blaschke(d, kSuiteTrials, derive_seed(seed, name), dist, workers));
      }
    }
  }
  if (want("simplex")) {
    for (int d = 1; d <= 6; ++d) {
      const std::string name = "simplex/d=" + std::to_string(d);
      out.push_back(verify_simplex_volume(d, kSuiteTrials, derive_seed(seed, name), workers));
    }
  }
  if (want("truncated")) {
    for (double t : {0.0, 0.5, 2.0}) {
      for (int d = 3; d <= 8; ++d) {
        out.push_back(verify_truncated_bound(d, t, kSuiteTrials,
                                             derive_seed(seed, tag("truncated", {{"d", d}, {"t", t}})), workers));
      }
    }
  }
  if (want("logconcave")) {
    for (auto f : {LogconcaveFamily::Uniform, LogconcaveFamily::Gaussian, LogconcaveFamily::TruncatedGaussian,
                   LogconcaveFamily::Laplace}) {
      out.push_back(
          verify_logconcave_moment(f, kSuiteTrials, derive_seed(seed, std::string("logconcave/") + to_string(f)),
                                   workers));
    }
  }
  if (want("dotdensity")) {
    for (int d : {2, 3, 5, 8}) {
      const std::string name = "dotdensity/d=" + std::to_string(d);
      out.push_back(verify_dot_density(d, kSuiteTrials, derive_seed(seed, name), workers));
    }
  }
  if (want("lp")) out.push_back(verify_lp_limit({10.0, 100.0, 1000.0}));
  if (want("triangulation")) {
    const int cases[][3] = {{2, 5, 0}, {2, 5, 1}, {3, 6, 0}, {4, 8, 2}};
    for (const auto& c : cases) {
      for (VerificationReport& r : verify_kfacet_triangulation(c[0], c[1], c[2], kSuiteTrials, kReducedTrials, seed,
                                                               workers)) {
        out.push_back(std::move(r));
      }
    }
  }
  if (want("estranged")) {
    for (int d : {2, 3}) out.push_back(verify_estranged_consistency(d, kEstrangedTrials, seed, workers));
  }
  return out;
}

}  // namespace gpoly
