#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "gpoly/error.hpp"
#include "gpoly/experiments.hpp"
#include "gpoly/special.hpp"
#include "gpoly/theory.hpp"
#include "gpoly/verify.hpp"

using namespace gpoly;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_estimate(const MCEstimate& a, const MCEstimate& b) {
  return same_bits(a.mean, b.mean) && same_bits(a.variance, b.variance) && a.trials == b.trials &&
         same_bits(a.std_error, b.std_error);
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("merge agrees with a two-pass oracle") {
    RngStream rng(1, 0);
    std::vector<std::array<double, 2>> xs(5001);
    for (auto& x : xs) {
      x[0] = 3.0 + rng.normal();
      x[1] = 0.5 * x[0] + rng.uniform();
    }
    RunningMoments left(2);
    RunningMoments right(2);
    for (std::size_t i = 0; i < xs.size(); ++i) (i < 1234 ? left : right).add(std::span<const double>(xs[i]));
    left.merge(right);
    double m0 = 0.0, m1 = 0.0;
    for (const auto& x : xs) {
      m0 += x[0];
      m1 += x[1];
    }
    m0 /= xs.size();
    m1 /= xs.size();
    double v0 = 0.0, c01 = 0.0;
    for (const auto& x : xs) {
      v0 += (x[0] - m0) * (x[0] - m0);
      c01 += (x[0] - m0) * (x[1] - m1);
    }
    v0 /= xs.size() - 1.0;
    c01 /= xs.size() - 1.0;
    CHECK(left.count() == xs.size());
    CHECK(left.mean(0) == doctest::Approx(m0).epsilon(1e-13));
    CHECK(left.mean(1) == doctest::Approx(m1).epsilon(1e-13));
    CHECK(left.variance(0) == doctest::Approx(v0).epsilon(1e-12));
    CHECK(left.covariance(0, 1) == doctest::Approx(c01).epsilon(1e-12));
    CHECK(left.covariance(1, 0) == left.covariance(0, 1));
    RunningMoments one(1);
    one.add(2.0);
    CHECK(one.variance() == 0.0);
  }

  TEST_CASE("estimate invariants") {
    const MCEstimate e = MCEstimate::from_moments(2.0, 4.0, 100);
    CHECK(e.std_error == doctest::Approx(0.2));
    CHECK(e.ci95_lo <= e.mean);
    CHECK(e.mean <= e.ci95_hi);
    CHECK(e.ci95_hi - e.mean == doctest::Approx(1.96 * 0.2).epsilon(1e-3));
    const MCEstimate s = e.scaled(10.0);
    CHECK(s.mean == doctest::Approx(20.0));
    CHECK(s.std_error == doctest::Approx(2.0));
    CHECK(z_score(e, 1.0) == doctest::Approx(5.0));
    CHECK(combined_z(e, e) == 0.0);
    const MCEstimate exact = MCEstimate::from_moments(1.0, 0.0, 10);
    CHECK(combined_z(exact, exact) == 0.0);
    CHECK(std::isinf(combined_z(exact, MCEstimate::from_moments(2.0, 0.0, 10))));
  }
}

TEST_SUITE("monte carlo driver") {
  TEST_CASE("constant trial") {
    const MCEstimate e = mc_run([](RngStream&) { return 2.5; }, 1000, 7, 2);
    CHECK(e.mean == 2.5);
    CHECK(e.variance == 0.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.trials == 1000);
  }

  TEST_CASE("normal draws") {
    const MCEstimate e = mc_run([](RngStream& r) { return r.normal(); }, 1000000, 8, 0);
    CHECK(std::abs(e.mean) < 3.0 * e.std_error);
    CHECK(std::abs(e.variance - 1.0) < 3.0 * std::sqrt(2.0 / 1e6));
    CHECK(e.std_error == doctest::Approx(std::sqrt(e.variance / 1e6)));
  }

  TEST_CASE("bit-identical for any worker count") {
    auto trial = [](RngStream& r) { return std::exp(r.normal()) + r.uniform(); };
    const MCEstimate one = mc_run(trial, 100003, 9, 1);
    for (unsigned w : {2u, 3u, 8u, 0u}) CHECK(same_estimate(one, mc_run(trial, 100003, 9, w)));
    CHECK_FALSE(same_estimate(one, mc_run(trial, 100003, 10, 1)));
    const std::vector<MCEstimate> a = kfacet_profile_mc(7, 2, 500, 3, 1);
    const std::vector<MCEstimate> b = kfacet_profile_mc(7, 2, 500, 3, 8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_estimate(a[i], b[i]));
  }

  TEST_CASE("trial i uses stream i") {
    const MCEstimate e = mc_run([](RngStream& r) { return static_cast<double>(r.stream_id()); }, 100, 1, 4);
    CHECK(e.mean == doctest::Approx(49.5));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(mc_run([](RngStream&) { return 0.0; }, 1, 1), DomainError);
    CHECK_THROWS_AS(mc_run([](RngStream&) { return 0.0; }, 0, 1), DomainError);
    for (unsigned w : {1u, 4u}) {
      try {
        mc_run(
            [](RngStream& r) {
              if (r.stream_id() == 700 || r.stream_id() == 3000) throw std::runtime_error("boom");
              return 0.0;
            },
            5000, 1, w);
        FAIL("expected TrialError");
      } catch (const TrialError& e) {
        CHECK(e.trial() == 700);
      }
    }
  }
}

TEST_SUITE("k-facet estimators") {
  TEST_CASE("three points on a line") {
    const MCEstimate e = kfacet_expectation_mc(3, 1, 0, 2000, 1, 0);
    CHECK(e.mean == 2.0);
    CHECK(e.variance == 0.0);
    const MCEstimate p = kfacet_expectation_mc(3, 1, 1, 2000, 1, 0);
    CHECK(p.mean == 1.0);
  }

  TEST_CASE("simplex facets are certain") {
    for (int d = 1; d <= 5; ++d) {
      const MCEstimate e = kfacet_expectation_mc(d + 1, d, 0, 200, 2, 0);
      CHECK(e.mean == d + 1.0);
      CHECK(e.variance == 0.0);
    }
  }

  TEST_CASE("full enumeration agrees with the exact expectation") {
    for (int k = 0; k <= 3; ++k) {
      const MCEstimate e = kfacet_expectation_mc(5, 2, k, 20000, 4 + k, 0);
      CHECK(std::abs(z_score(e, kfacet_expectation_exact({5, 2, k}))) <= 3.0);
    }
    const MCEstimate e = kfacet_expectation_mc(9, 3, 2, 5000, 11, 0);
    CHECK(std::abs(z_score(e, kfacet_expectation_exact({9, 3, 2}))) <= 3.0);
  }

  TEST_CASE("profile sums to two C(n,d) per trial") {
    const std::vector<MCEstimate> p = kfacet_profile_mc(8, 2, 300, 5, 0);
    REQUIRE(p.size() == 7);
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) sum += p[k].mean * (2 * k == 6 ? 2.0 : 1.0);
    CHECK(sum == doctest::Approx(2.0 * 28.0).epsilon(1e-12));
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k].mean == doctest::Approx(p[6 - k].mean));
  }

  TEST_CASE("fixed subset and reduced surrogate") {
    const double exact = kfacet_probability_exact({10, 3, 2});
    const MCEstimate f = fixed_subset_kfacet_probability_mc(10, 3, 2, 100000, 21, 0);
    const MCEstimate r = reduced_kfacet_probability_mc(10, 3, 2, 400000, 22, 0);
    CHECK(std::abs(z_score(f, exact)) <= 3.0);
    CHECK(std::abs(z_score(r, exact)) <= 3.0);
    CHECK(std::abs(combined_z(f, r)) <= 3.0);
    const std::vector<MCEstimate> prof = reduced_kfacet_profile_mc(10, 3, 100000, 23, 0);
    REQUIRE(prof.size() == 8);
    for (int k = 0; k <= 7; ++k) CHECK(std::abs(z_score(prof[k], kfacet_probability_exact({10, 3, k}))) <= 3.0);
  }

  TEST_CASE("parameter and cap errors") {
    CHECK_THROWS_AS(kfacet_expectation_mc(3, 3, 0, 10, 1), DomainError);
    CHECK_THROWS_AS(kfacet_expectation_mc(5, 2, 4, 10, 1), DomainError);
    ResourceCaps tight;
    tight.max_subsets = 10;
    CHECK_THROWS_AS(kfacet_expectation_mc(6, 2, 0, 10, 1, 0, tight), ResourceBoundError);
    CHECK_THROWS_AS(estranged_expectation_mc(8, 10, 1), ResourceBoundError);
    CHECK_THROWS_AS(pair_facet_probability_mc(11, 10, 1), ResourceBoundError);
  }
}

TEST_SUITE("estranged estimators") {
  TEST_CASE("small dimensions") {
    CHECK(pair_facet_probability_mc(1, 1000, 1, 0).mean == 1.0);
    const MCEstimate e = estranged_expectation_mc(2, 20000, 2, 0);
    CHECK(e.mean > 0.0);
    CHECK(e.mean <= 3.0);
    const MCEstimate p = pair_facet_probability_mc(2, 40000, 3, 0);
    // ½·C(4,2)·P(pair) is the same expectation.
    CHECK(std::abs(combined_z(e, p.scaled(3.0))) <= 3.0);
  }
}

TEST_SUITE("growth table") {
  TEST_CASE("rows follow alpha and r") {
    const std::vector<GrowthRow> rows = facet_growth_table(2.0, 0.0, {2, 3, 4}, 2000, 5, 0);
    REQUIRE(rows.size() == 3);
    for (const GrowthRow& row : rows) {
      CHECK(row.n == 2 * row.d);
      CHECK(row.k == 0);
      CHECK(row.root == doctest::Approx(std::pow(row.estimate.mean, 1.0 / row.d)));
      CHECK(row.base == doctest::Approx(growth_base_kfacet(2.0, 0.0)));
      CHECK(row.root / row.base > 0.3);
      CHECK(row.root / row.base < 3.0);
    }
    ResourceCaps tight;
    tight.max_subsets = 100;
    CHECK(facet_growth_table(2.0, 0.0, {2, 3, 6}, 100, 5, 0, tight).size() == 2);
  }
}

TEST_SUITE("verification checks") {
  TEST_CASE("Blaschke second moment") {
    for (auto dist : {BlaschkeDistribution::Gaussian, BlaschkeDistribution::UniformCube}) {
      const VerificationReport r = verify_blaschke(3, 100000, 1, dist, 0);
      CHECK(r.passed);
      REQUIRE(r.estimate.has_value());
      CHECK(std::abs(r.estimate->mean / r.theory - 1.0) < 0.02);
    }
    CHECK(verify_blaschke(2, 10, 1, BlaschkeDistribution::Gaussian).theory == doctest::Approx(1.5));
    CHECK_THROWS_AS(verify_blaschke(7, 10, 1, BlaschkeDistribution::Gaussian), DomainError);
  }

  TEST_CASE("simplex volume and truncation") {
    CHECK(verify_simplex_volume(3, 100000, 2, 0).passed);
    const VerificationReport far = verify_truncated_bound(4, 40.0, 100000, 3, 0);
    REQUIRE(far.estimate.has_value());
    CHECK(std::abs(z_score(*far.estimate, gaussian_simplex_expected_volume(3).value)) <= 3.0);
    CHECK(far.passed);
    CHECK(verify_truncated_bound(5, 0.0, 50000, 4, 0).passed);
    CHECK_THROWS_AS(verify_truncated_bound(1, 0.0, 10, 1), DomainError);
    CHECK_THROWS_AS(verify_truncated_bound(4, -1.0, 10, 1), DomainError);
  }

  TEST_CASE("logconcave ratios") {
    for (auto f : {LogconcaveFamily::Uniform, LogconcaveFamily::Gaussian, LogconcaveFamily::TruncatedGaussian,
                   LogconcaveFamily::Laplace}) {
      const VerificationReport r = verify_logconcave_moment(f, 100000, 5, 0);
      CHECK(r.passed);
      REQUIRE(r.estimate.has_value());
      CHECK(r.theory == 0.125);
      REQUIRE(r.details.size() >= 2);
      CHECK(r.details[0].first == "reference_ratio");
      CHECK(std::abs(r.estimate->mean - r.details[0].second) <= 3.0 * r.estimate->std_error);
    }
    const VerificationReport u = verify_logconcave_moment(LogconcaveFamily::Uniform, 10, 1);
    CHECK(u.details[0].second == doctest::Approx(std::sqrt(3.0) / 2.0));
    const VerificationReport g = verify_logconcave_moment(LogconcaveFamily::Gaussian, 10, 1);
    CHECK(g.details[0].second == doctest::Approx(std::sqrt(2.0 / kPi)));
  }

  TEST_CASE("dot density and Lp limit") {
    CHECK(verify_dot_density(4, 100000, 6, 0).passed);
    // The norm only increases past p = 2πe.
    CHECK(verify_lp_limit({20, 50, 100, 1000, 10000}).passed);
    CHECK_FALSE(verify_lp_limit({1, 2, 5}).passed);
    CHECK_FALSE(verify_lp_limit({20, 30}).passed);
  }

  TEST_CASE("triangulation and estranged consistency") {
    const std::vector<VerificationReport> t = verify_kfacet_triangulation(2, 6, 1, 20000, 200000, 7, 0);
    REQUIRE(t.size() == 3);
    for (const auto& r : t) CHECK(r.passed);
    CHECK(verify_estranged_consistency(2, 20000, 8, 0).passed);
  }

  TEST_CASE("suite lookup") {
    CHECK_THROWS_AS(run_suite("nope", 1), DomainError);
    const std::vector<VerificationReport> lp = run_suite("lp", 1);
    REQUIRE(lp.size() == 1);
    CHECK(lp[0].passed);
    CHECK(run_suite("simplex", 11).size() == 6);
  }
}
