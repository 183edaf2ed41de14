#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>

#include <Eigen/Geometry>
#include <Eigen/QR>

#include "doctest.h"

#include "gpoly/error.hpp"
#include "gpoly/linalg.hpp"
#include "gpoly/optimize.hpp"
#include "gpoly/quadrature.hpp"
#include "gpoly/special.hpp"

using namespace gpoly;

namespace {

// Φ(y) = 1/2 + φ(y)·Σ y^{2n+1}/(2n+1)!!, summed in long double.
double phi_series(double y) {
  const long double x = y;
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 400; ++n) {
    term *= x * x / (2.0L * n + 1.0L);
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  const long double pdf = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264L);
  return static_cast<double>(0.5L + pdf * sum);
}

// log Φ(−x) for large x via the Laplace continued fraction of the Mills ratio.
double log_lower_tail_cf(double x) {
  long double r = 0.0L;
  for (int k = 300; k >= 1; --k) r = k / (x + r);
  const long double mills = 1.0L / (x + r);
  return static_cast<double>(-0.5L * x * x - 0.5L * std::log(2.0L * 3.14159265358979323846264L) + std::log(mills));
}

Matrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(gen);
  return m;
}

Matrix random_rotation(std::mt19937_64& gen, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(gen, d, d));
  return qr.householderQ();
}

}  // namespace

TEST_SUITE("special functions") {
  TEST_CASE("normal cdf matches a series oracle") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std::abs(std_normal_cdf(1.96) - 0.9750021049) < 1e-9);
    for (double y = -8.0; y <= 8.0; y += 0.0625) {
      CHECK(std::abs(std_normal_cdf(y) - phi_series(y)) < 1e-14);
      CHECK(std::abs(std_normal_cdf(y) + std_normal_cdf(-y) - 1.0) <= 1e-14);
      CHECK(std::abs(std_normal_sf(y) - std_normal_cdf(-y)) <= 1e-16);
    }
  }

  TEST_CASE("lower tail stays relative-accurate") {
    for (double y : {-10.0, -20.0, -29.5, -30.0, -30.5, -38.0, -50.0, -100.0, -1000.0}) {
      const double oracle = log_lower_tail_cf(-y);
      CHECK(std::abs(log_std_normal_cdf(y) - oracle) <= 1e-12 * std::abs(oracle));
    }
    // Relative accuracy of Φ itself deep in the tail.
    CHECK(std::abs(std_normal_cdf(-20.0) / std::exp(log_lower_tail_cf(20.0)) - 1.0) < 1e-12);
    CHECK(log_std_normal_cdf(0.0) == doctest::Approx(std::log(0.5)));
    CHECK(log_std_normal_cdf(40.0) == doctest::Approx(0.0));
  }

  TEST_CASE("normal pdf") {
    CHECK(std::abs(std_normal_pdf(0.0) - 0.3989422804) < 1e-10);
    CHECK(std::abs(std_normal_pdf(1.0) - 0.2419707245) < 1e-10);
    for (double y : {0.3, 1.7, 4.2, 9.0}) CHECK(std_normal_pdf(y) == std_normal_pdf(-y));
  }

  TEST_CASE("log gamma") {
    CHECK(log_gamma(1.0) == 0.0);
    CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-14);
    CHECK(std::abs(log_gamma(0.5) - 0.5723649429247001) < 1e-14);
    double log_fact = 0.0;
    for (int n = 2; n <= 150; ++n) {
      log_fact += std::log(static_cast<double>(n - 1));
      CHECK(std::abs(log_gamma(n) - log_fact) <= 1e-12 * std::max(1.0, log_fact));
    }
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  }

  TEST_CASE("binomials") {
    CHECK(log_binomial(17, 0) == 0.0);
    CHECK(std::abs(log_binomial(4, 2) - std::log(6.0)) < 1e-15);
    CHECK(std::abs(log_binomial(24, 12) - std::log(2704156.0)) < 1e-14);
    for (std::int64_t n : {61, 100, 400, 1000}) {
      for (std::int64_t k : {std::int64_t{1}, n / 3, n / 2}) {
        double oracle = 0.0;
        for (std::int64_t i = 1; i <= k; ++i) oracle += std::log(static_cast<double>(n - k + i) / static_cast<double>(i));
        CHECK(std::abs(log_binomial(n, k) - oracle) <= 1e-10 * std::max(1.0, oracle));
      }
    }
    CHECK_THROWS_AS(log_binomial(3, 4), DomainError);
    CHECK_THROWS_AS(log_binomial(3, -1), DomainError);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK(binomial(14, 7) == 3432);
    CHECK_THROWS_AS(binomial(100, 50), DomainError);
  }
}

TEST_SUITE("linear algebra") {
  TEST_CASE("solve residual on random well-conditioned systems") {
    std::mt19937_64 gen(11);
    for (Eigen::Index d = 2; d <= 20; ++d) {
      const Matrix a = random_matrix(gen, d, d) + 2.0 * std::sqrt(static_cast<double>(d)) * Matrix::Identity(d, d);
      const Vector b = random_matrix(gen, d, 1);
      const Vector x = solve_linear(a, b);
      CHECK((a * x - b).norm() <= 1e-10 * b.norm());
    }
  }

  TEST_CASE("determinant is multiplicative") {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix a = random_matrix(gen, 5, 5);
      const Matrix b = random_matrix(gen, 5, 5);
      const double lhs = determinant(Matrix(a * b));
      const double rhs = determinant(a) * determinant(b);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
    }
  }

  TEST_CASE("singular and mismatched inputs") {
    Matrix s(3, 3);
    s << 1, 2, 3, 2, 4, 6, 0, 1, 1;
    CHECK(determinant(s) == 0.0);
    CHECK_THROWS_AS(solve_linear(s, Vector::Ones(3)), SingularMatrixError);
    CHECK_THROWS_AS(solve_linear(Matrix::Identity(3, 3), Vector::Ones(2)), DimensionError);
    CHECK_THROWS_AS(determinant(Matrix::Ones(2, 3)), DimensionError);
    CHECK(determinant(Matrix::Identity(4, 4)) == 1.0);
  }

  TEST_CASE("simplex volume examples") {
    Matrix seg(2, 2);
    seg << 0, 3, 0, 0;
    CHECK(simplex_volume(seg) == doctest::Approx(3.0).epsilon(1e-14));
    Matrix tri(3, 3);
    tri << 0, 1, 0, 0, 0, 1, 0, 0, 0;
    CHECK(simplex_volume(tri) == doctest::Approx(0.5).epsilon(1e-14));
    Matrix seg2(2, 2);
    seg2 << 1, 4, 1, 5;
    CHECK(simplex_volume(seg2) == doctest::Approx(5.0).epsilon(1e-14));

    double fact = 1.0;
    for (Eigen::Index d = 1; d <= 8; ++d) {
      fact *= static_cast<double>(d);
      Matrix corner = Matrix::Zero(d, d + 1);
      corner.rightCols(d) = Matrix::Identity(d, d);
      CHECK(simplex_volume(corner) == doctest::Approx(1.0 / fact).epsilon(1e-13));
    }
    CHECK(simplex_volume(Matrix::Ones(3, 1)) == 1.0);
    CHECK_THROWS_AS(simplex_volume(Matrix::Ones(2, 4)), DimensionError);
    CHECK_THROWS_AS(simplex_volume(Matrix(3, 0)), DimensionError);
  }

  TEST_CASE("triangle area in R^3 matches the cross product") {
    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 100; ++rep) {
      const Matrix p = random_matrix(gen, 3, 3);
      const Eigen::Vector3d u = p.col(1) - p.col(0);
      const Eigen::Vector3d v = p.col(2) - p.col(0);
      CHECK(simplex_volume(p) == doctest::Approx(0.5 * u.cross(v).norm()).epsilon(1e-12));
    }
  }

  TEST_CASE("simplex volume is invariant under permutations and rigid motions") {
    std::mt19937_64 gen(14);
    for (Eigen::Index d = 2; d <= 6; ++d) {
      for (Eigen::Index k : {d - 1, d}) {
        const Matrix p = random_matrix(gen, d, k + 1);
        const double v = simplex_volume(p);
        Matrix perm = p;
        std::vector<int> order(static_cast<std::size_t>(k + 1));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), gen);
        for (Eigen::Index j = 0; j <= k; ++j) perm.col(j) = p.col(order[static_cast<std::size_t>(j)]);
        CHECK(std::abs(simplex_volume(perm) - v) <= 1e-9 * v);
        const Matrix q = random_rotation(gen, d);
        const Vector shift = random_matrix(gen, d, 1);
        const Matrix moved = (q * p).colwise() + shift;
        CHECK(std::abs(simplex_volume(moved) - v) <= 1e-9 * v);
      }
    }
  }

  TEST_CASE("templates accept other scalar types") {
    Eigen::Matrix3f tri;
    tri << 0, 1, 0, 0, 0, 1, 0, 0, 0;
    CHECK(simplex_volume(tri) == doctest::Approx(0.5f));
    Eigen::Matrix<long double, 2, 2> a;
    a << 2, 1, 1, 3;
    CHECK(static_cast<double>(determinant(a)) == doctest::Approx(5.0));
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("examples") {
    CHECK(integrate_1d([](double) { return 1.0; }, 0.0, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
    const double third = integrate_1d(
                             [](double y) {
                               const double s = std_normal_sf(y);
                               return s * s * std_normal_pdf(y);
                             },
                             -10.0, 10.0)
                             .value;
    CHECK(std::abs(third - 1.0 / 3.0) < 1e-10);
  }

  TEST_CASE("powers of the normal density against the closed form") {
    for (int d = 1; d <= 30; ++d) {
      const QuadratureResult q = integrate_1d([d](double y) { return std::pow(std_normal_pdf(y), d); }, -10.0, 10.0);
      const double closed = std::pow(2.0 * kPi, 0.5 * (1 - d)) / std::sqrt(static_cast<double>(d));
      CHECK(std::abs(q.value - closed) <= 1e-10 * closed);
      CHECK(q.abs_error_estimate <= 1e-10 * std::abs(q.value));
    }
    CHECK(integrate_1d([](double y) { return std::pow(std_normal_pdf(y), 3); }, -10.0, 10.0).value ==
          doctest::Approx(0.0918881).epsilon(1e-6));
  }

  TEST_CASE("errors") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate_1d(one, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(integrate_1d(one, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(integrate_1d(one, 0.0, 1.0, 1e-14), DomainError);
    CHECK_THROWS_AS(integrate_1d([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; },
                                 0.0, 1.0),
                    DomainError);
    // An integrable singularity the cap cannot resolve to 1e-13.
    try {
      integrate_1d([](double x) { return 1.0 / std::sqrt(std::abs(x - 1.0 / 3.0)); }, 0.0, 1.0,
                   QuadratureOptions{1e-13, 0.0, 20});
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(std::isfinite(e.best_value()));
      CHECK(e.abs_error() > 0.0);
    }
  }
}

TEST_SUITE("optimisation") {
  TEST_CASE("one-dimensional examples") {
    const MaximizeResult r = maximize_1d(std_normal_pdf, -8.0, 8.0);
    CHECK(std::abs(r.argmax[0]) < 1e-7);
    CHECK(std::abs(r.value - kInvSqrt2Pi) < 1e-14);

    auto sym = [](double y) {
      const double p = std_normal_pdf(y);
      return std_normal_cdf(y) * std_normal_sf(y) * p * p;
    };
    CHECK(std::abs(maximize_1d(sym, -8.0, 8.0).argmax[0]) < 1e-6);
  }

  TEST_CASE("tail-weighted density against a dense grid") {
    auto f = [](double y) { return std_normal_sf(y) * std_normal_pdf(y); };
    const MaximizeResult r = maximize_1d(f, -8.0, 8.0);
    double best = -1.0;
    double arg = 0.0;
    const int nodes = 1000001;
    for (int i = 0; i < nodes; ++i) {
      const double y = -8.0 + 16.0 * i / (nodes - 1);
      if (f(y) > best) {
        best = f(y);
        arg = y;
      }
    }
    CHECK(r.value >= best);
    CHECK(r.value - best < 1e-9);
    CHECK(std::abs(r.argmax[0] - arg) < 2e-5);
    CHECK(r.argmax[0] == doctest::Approx(-0.506).epsilon(1e-3));
    CHECK(r.grid_resolution <= 16.0 / 2048.0);
  }

  TEST_CASE("box examples") {
    const std::vector<Interval> box = {{0.0, 2.0}, {-1.0, 1.0}};
    const MaximizeResult c = maximize_box([](const Vector&) { return 3.5; }, box);
    CHECK(c.value == 3.5);
    const MaximizeResult q = maximize_box([](const Vector& x) { return -x[0] * x[0] - x[1] * x[1]; }, box);
    CHECK(std::abs(q.value) < 1e-12);
    CHECK(q.argmax.norm() < 1e-6);
    CHECK_THROWS(maximize_box([](const Vector&) { return 0.0; }, {}));
  }

  TEST_CASE("near-optimal basins are all reported") {
    // Two equal peaks at x = ±1.
    auto f = [](const Vector& x) { return std::exp(-8.0 * (x[0] - 1.0) * (x[0] - 1.0)) + std::exp(-8.0 * (x[0] + 1.0) * (x[0] + 1.0)); };
    const MaximizeResult r = maximize_box(f, {{-2.0, 2.0}});
    CHECK(r.near_optimal.size() == 2);
  }

  TEST_CASE("refining the grid never lowers the maximum") {
    auto f1 = [](double y) { return std::pow(std_normal_cdf(y), 0.3) * std_normal_sf(y) * std_normal_pdf(y); };
    double previous = -1.0;
    for (std::size_t nodes : {2049u, 4097u, 8193u, 16385u}) {
      const double v = maximize_1d(f1, -12.0, 12.0, nodes).value;
      CHECK(v >= previous);
      previous = v;
    }
    auto f3 = [](const Vector& x) {
      return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) * std_normal_cdf(x[1] - x[0] * x[2]) *
             std_normal_sf(x[0] - x[1] * x[2]) * std::sqrt(1.0 - x[2] * x[2]);
    };
    const std::vector<Interval> box = {{0.0, 6.0}, {0.0, 6.0}, {-0.999, 0.999}};
    previous = -1.0;
    for (std::size_t nodes : {65u, 129u}) {
      BoxSearchOptions o;
      o.nodes_per_axis = nodes;
      const double v = maximize_box(f3, box, o).value;
      CHECK(v >= previous);
      previous = v;
    }
  }
}
