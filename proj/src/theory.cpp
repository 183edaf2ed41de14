#include "gpoly/theory.hpp"

#include <cmath>
#include <string>

#include "gpoly/error.hpp"
#include "gpoly/quadrature.hpp"
#include "gpoly/special.hpp"

namespace gpoly {

namespace {

constexpr double kIntegrationHalfWidth = 12.0;
constexpr double kRhoMax = 6.0;
constexpr double kWClip = 1e-9;
constexpr double kLn2 = 0.69314718055994530942;

double side_probability(double t, Sign s) { return s == Sign::Minus ? std_normal_cdf(t) : std_normal_sf(t); }

std::vector<Interval> estranged_box(int radii) {
  std::vector<Interval> box(static_cast<std::size_t>(radii), Interval{0.0, kRhoMax});
  box.push_back({-1.0 + kWClip, 1.0 - kWClip});
  return box;
}

void require_alpha_r(double alpha, double r) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 1, got " + std::to_string(alpha));
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0, 1], got " + std::to_string(r));
}

}  // namespace

KFacetFormulaInputs::KFacetFormulaInputs(std::int64_t n_, std::int64_t d_, std::int64_t k_) : n(n_), d(d_), k(k_) {
  if (d < 1) throw DomainError("k-facet inputs: need d >= 1");
  if (n < d + 1) throw DomainError("k-facet inputs: need n >= d + 1");
  if (k < 0 || k > n - d) throw DomainError("k-facet inputs: need 0 <= k <= n - d");
}

double binary_entropy(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("binary_entropy: r must lie in [0, 1]");
  if (r == 0.0 || r == 1.0) return 0.0;
  return -(r * std::log2(r) + (1.0 - r) * std::log2(1.0 - r));
}

double log_kfacet_probability_exact(const KFacetFormulaInputs& in) {
  const auto above = static_cast<double>(in.k);
  const auto below = static_cast<double>(in.n - in.d - in.k);
  const auto dim = static_cast<double>(in.d);
  auto log_integrand = [=](double y) {
    double v = -0.5 * dim * y * y;
    if (above > 0.0) v += above * log_std_normal_cdf(y);
    if (below > 0.0) v += below * log_std_normal_cdf(-y);
    return v;
  };
  const double peak = maximize_1d(log_integrand, -kIntegrationHalfWidth, kIntegrationHalfWidth).value;
  const QuadratureResult q = integrate_1d([&](double y) { return std::exp(log_integrand(y) - peak); },
                                          -kIntegrationHalfWidth, kIntegrationHalfWidth, 1e-12);
  const bool balanced = 2 * in.k == in.n - in.d;
  const double multiplicity = balanced ? 1.0 : 2.0;
  return std::log(multiplicity) + log_binomial(in.n - in.d, in.k) + 0.5 * std::log(dim / (2.0 * kPi)) + peak +
         std::log(q.value);
}

double kfacet_probability_exact(const KFacetFormulaInputs& in) { return std::exp(log_kfacet_probability_exact(in)); }

double log_kfacet_expectation_exact(const KFacetFormulaInputs& in) {
  return log_binomial(in.n, in.d) + log_kfacet_probability_exact(in);
}

double kfacet_expectation_exact(const KFacetFormulaInputs& in) { return std::exp(log_kfacet_expectation_exact(in)); }

ConstantResult c_alpha_r(double alpha, double r, ExponentConvention convention) {
  require_alpha_r(alpha, r);
  const double a = convention == ExponentConvention::Proof ? r * (alpha - 1.0) : r * alpha;
  const double b = convention == ExponentConvention::Proof ? (1.0 - r) * (alpha - 1.0) : alpha - 1.0 - r * alpha;
  auto f = [=](double y) { return std::pow(std_normal_cdf(y), a) * std::pow(std_normal_sf(y), b) * std_normal_pdf(y); };

  ConstantResult out;
  out.name = "c_alpha_r";
  out.diagnostics = maximize_1d(f, -kIntegrationHalfWidth, kIntegrationHalfWidth);
  out.argmax = out.diagnostics.argmax;
  out.value = f(out.argmax[0]);
  out.parameters = {{"alpha", alpha}, {"r", r}, {"statement_exponents", convention == ExponentConvention::Statement ? 1.0 : 0.0}};
  return out;
}

double growth_base_kfacet(double alpha, double r, ExponentConvention convention) {
  const double c = c_alpha_r(alpha, r, convention).value;
  const double log2_base = alpha * binary_entropy(1.0 / alpha) + (alpha - 1.0) * binary_entropy(r);
  return std::exp(log2_base * kLn2) * kSqrt2Pi * c;
}

double signed_distance_t(double rho1, double rho2, double w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("signed_distance_t: need |w| < 1");
  return (rho2 - rho1 * w) / std::sqrt(1.0 - w * w);
}

double estranged_integrand(double rho1, double rho2, double w, Sign s1, Sign s2) {
  if (!(std::abs(w) < 1.0)) throw DomainError("estranged_integrand: need |w| < 1");
  if (!(rho1 >= 0.0 && rho2 >= 0.0)) throw DomainError("estranged_integrand: radii must be non-negative");
  const double root = std::sqrt(1.0 - w * w);
  const double t21 = (rho2 - rho1 * w) / root;
  const double t12 = (rho1 - rho2 * w) / root;
  return std::exp(-0.5 * (rho1 * rho1 + rho2 * rho2)) * side_probability(t21, s1) * side_probability(t12, s2) * root;
}

ConstantResult estranged_constant(Sign s1, Sign s2, const BoxSearchOptions& options) {
  auto f = [=](const Vector& x) { return estranged_integrand(x[0], x[1], x[2], s1, s2); };
  ConstantResult out;
  out.name = std::string("C(") + sign_char(s1) + "," + sign_char(s2) + ")";
  out.diagnostics = maximize_box(f, estranged_box(2), options);
  out.argmax = out.diagnostics.argmax;
  out.value = f(out.argmax);
  out.parameters = {{"s1", s1 == Sign::Minus ? -1.0 : 1.0}, {"s2", s2 == Sign::Minus ? -1.0 : 1.0}};
  return out;
}

ConstantResult estranged_constant_reduced(const BoxSearchOptions& options) {
  auto f = [](const Vector& x) {
    const double rho = x[0];
    const double w = x[1];
    const double root = std::sqrt(1.0 - w * w);
    const double phi = std_normal_cdf(rho * (1.0 - w) / root);
    return std::exp(-rho * rho) * phi * phi * root;
  };
  ConstantResult out;
  out.name = "C_pair";
  out.diagnostics = maximize_box(f, estranged_box(1), options);
  out.argmax = out.diagnostics.argmax;
  out.value = f(out.argmax);
  return out;
}

double dot_density(double w, int d) {
  if (d < 2) throw DomainError("dot_density: need d >= 2");
  if (!(std::abs(w) <= 1.0)) throw DomainError("dot_density: need |w| <= 1");
  const double log_norm = log_gamma(0.5 * d) - 0.5 * std::log(kPi) - log_gamma(0.5 * (d - 1));
  return std::exp(log_norm) * std::pow(1.0 - w * w, 0.5 * (d - 3));
}

double dot_density_moment(int d, int p) {
  if (d < 2) throw DomainError("dot_density_moment: need d >= 2");
  if (p < 0) throw DomainError("dot_density_moment: need p >= 0");
  if (p % 2 == 1) return 0.0;
  const double norm = std::exp(log_gamma(0.5 * d) - 0.5 * std::log(kPi) - log_gamma(0.5 * (d - 1)));
  // w = sin u, dw = cos u du, (1 − w²)^{(d−3)/2} = cos^{d−3} u.
  auto f = [=](double u) { return std::pow(std::sin(u), p) * std::pow(std::cos(u), d - 2); };
  const QuadratureResult q = integrate_1d(f, -0.5 * kPi, 0.5 * kPi, QuadratureOptions{1e-13, 1e-16});
  return norm * q.value;
}

SimplexVolumeFormula gaussian_simplex_expected_volume(int d) {
  if (d < 1) throw DomainError("gaussian_simplex_expected_volume: need d >= 1");
  const double log_value = 0.5 * std::log(d + 1.0) - 0.5 * d * kLn2 - log_gamma(0.5 * d + 1.0);
  const double log_asym = -0.5 * std::log(kPi) + 0.5 * d * (1.0 - std::log(static_cast<double>(d)));
  return {std::exp(log_value), std::exp(log_asym)};
}

double log_truncated_simplex_lower_bound(int d) {
  if (d < 2) throw DomainError("truncated_simplex_lower_bound: need d >= 2");
  return 0.5 * std::log(1.0 - 2.0 / kPi) + 0.5 * std::log(static_cast<double>(d)) - 0.5 * (d + 5.0) * kLn2 -
         log_gamma(0.5 * (d + 1.0));
}

double truncated_simplex_lower_bound(int d) { return std::exp(log_truncated_simplex_lower_bound(d)); }

double normal_lp_norm(double p) {
  if (!(p >= 1.0)) throw DomainError("normal_lp_norm: need p >= 1");
  // (φ/φ(0))^p = e^{−p y²/2} keeps the integrand O(1).
  const QuadratureResult q = integrate_1d([p](double y) { return std::exp(-0.5 * p * y * y); }, -kIntegrationHalfWidth,
                                          kIntegrationHalfWidth, 1e-13);
  return kInvSqrt2Pi * std::pow(q.value, 1.0 / p);
}

}  // namespace gpoly
