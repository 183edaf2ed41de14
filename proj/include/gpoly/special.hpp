#pragma once

#include <cstdint>

namespace gpoly {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // (2π)^{-1/2}
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

/// Standard normal CDF Φ(y), through erfc so neither tail cancels.
double std_normal_cdf(double y);

/// 1 − Φ(y) without forming the difference.
double std_normal_sf(double y);

/// log Φ(y); stays finite far into the lower tail.
double log_std_normal_cdf(double y);

/// Standard normal density φ(y).
double std_normal_pdf(double y);

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// ln C(n, k). Throws DomainError unless 0 ≤ k ≤ n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Exact C(n, k) as an integer; throws DomainError on overflow of 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace gpoly
