#pragma once

#include <cstddef>
#include <functional>

namespace gpoly {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss–Kronrod quadrature of f over [a, b].
///
/// Converged when abs_error_estimate ≤ max(abs_tol, rel_tol·|value|). Throws
/// ConvergenceError (carrying the best value and its error estimate) when the
/// interval cap is reached first, and DomainError for a ≥ b, rel_tol < 1e-13
/// or a non-finite integrand value.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& options);

inline QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol = 1e-10) {
  return integrate_1d(f, a, b, QuadratureOptions{rel_tol});
}

}  // namespace gpoly
