#include "gpoly/special.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gpoly/error.hpp"

namespace gpoly {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double std_normal_cdf(double y) { return 0.5 * std::erfc(-y * kInvSqrt2); }

double std_normal_sf(double y) { return 0.5 * std::erfc(y * kInvSqrt2); }

double log_std_normal_cdf(double y) {
  if (y > -30.0) return std::log(std_normal_cdf(y));
  // Asymptotic series for the far lower tail, where erfc underflows.
  const double z = -y;
  const double z2 = z * z;
  double series = 1.0;
  double term = 1.0;
  for (int k = 1; k < 8; ++k) {
    term *= -(2.0 * k - 1.0) / z2;
    series += term;
  }
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * kPi) + std::log(series);
}

double std_normal_pdf(double y) { return kInvSqrt2Pi * std::exp(-0.5 * y * y); }

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) {
    throw DomainError("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (k == 0 || k == n) return 0.0;
  if (n <= 60) return std::log(static_cast<double>(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k))));
  return log_gamma(static_cast<double>(n) + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
         log_gamma(static_cast<double>(n - k) + 1.0);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t q = num / (i / g);
    if (r != 0 && q > std::numeric_limits<std::uint64_t>::max() / r) {
      throw DomainError("binomial: C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 64 bits");
    }
    result = r * q;
  }
  return result;
}

}  // namespace gpoly
