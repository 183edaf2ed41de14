#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpoly/optimize.hpp"

namespace gpoly {

enum class Sign { Minus, Plus };

inline char sign_char(Sign s) { return s == Sign::Minus ? '-' : '+'; }

/// A maximised constant and where it is attained.
struct ConstantResult {
  std::string name;
  double value = 0.0;
  Vector argmax;
  /// Named parameters that define the objective (alpha, r, s1, s2, ...).
  std::vector<std::pair<std::string, double>> parameters;
  MaximizeResult diagnostics;
};

/// (n, d, k) with n ≥ d+1 and 0 ≤ k ≤ n−d. Validated on construction.
struct KFacetFormulaInputs {
  KFacetFormulaInputs(std::int64_t n, std::int64_t d, std::int64_t k);

  std::int64_t n;
  std::int64_t d;
  std::int64_t k;
};

/// H(r) in bits, with H(0) = H(1) = 0.
double binary_entropy(double r);

/// Probability that a fixed d-subset of n Gaussian points is a k-facet:
///   m·C(n−d, k)·√(d/2π)·∫ Φ(y)^k (1−Φ(y))^{n−d−k} e^{−dy²/2} dy  over [−12, 12],
/// with m = 1 when k = (n−d)/2 and m = 2 otherwise.
double kfacet_probability_exact(const KFacetFormulaInputs& in);

/// Natural log of kfacet_probability_exact, computed without underflow.
double log_kfacet_probability_exact(const KFacetFormulaInputs& in);

/// E e_k = C(n, d)·P, assembled in log space.
double kfacet_expectation_exact(const KFacetFormulaInputs& in);
double log_kfacet_expectation_exact(const KFacetFormulaInputs& in);

/// Which exponents c_{α,r} puts on Φ and 1−Φ.
enum class ExponentConvention {
  /// r(α−1) and (1−r)(α−1): consistent with k ≈ r(α−1)d.
  Proof,
  /// rα and α−1−rα, as written in the theorem statement.
  Statement,
};

/// c_{α,r} = max_y Φ(y)^a (1−Φ(y))^b φ(y) over [−12, 12].
ConstantResult c_alpha_r(double alpha, double r, ExponentConvention convention = ExponentConvention::Proof);

/// 2^{αH(1/α)}·2^{(α−1)H(r)}·√(2π)·c_{α,r}: the base of the exponential growth of E e_k.
double growth_base_kfacet(double alpha, double r, ExponentConvention convention = ExponentConvention::Proof);

/// Offset, measured inside the first hyperplane, of its intersection with the
/// second: (ρ₂ − ρ₁w)/√(1−w²). Throws DomainError for |w| ≥ 1.
double signed_distance_t(double rho1, double rho2, double w);

/// e^{−(ρ₁²+ρ₂²)/2}·S₁(t₂₁)·S₂(t₁₂)·√(1−w²), where S = Φ for Sign::Minus and
/// 1−Φ for Sign::Plus, t₂₁ = signed_distance_t(ρ₁, ρ₂, w), t₁₂ = signed_distance_t(ρ₂, ρ₁, w).
double estranged_integrand(double rho1, double rho2, double w, Sign s1, Sign s2);

/// Supremum of estranged_integrand over ρ₁, ρ₂ ∈ [0, 6], w ∈ [−1+1e-9, 1−1e-9].
ConstantResult estranged_constant(Sign s1, Sign s2, const BoxSearchOptions& options = {});

/// The (−,−) constant from its one-radius form
/// e^{−ρ²}Φ(ρ(1−w)/√(1−w²))²√(1−w²) over ρ ∈ [0, 6], w ∈ [−1+1e-9, 1−1e-9].
ConstantResult estranged_constant_reduced(const BoxSearchOptions& options = {});

/// Density of ⟨θ₁, θ₂⟩ for independent uniform directions in R^d:
/// Γ(d/2)/(√π Γ((d−1)/2))·(1−w²)^{(d−3)/2}.
double dot_density(double w, int d);

/// ∫ w^p · dot_density(w, d) dw over [−1, 1], integrated in the angle
/// w = sin u so the d = 2 endpoint singularity disappears.
double dot_density_moment(int d, int p);

struct SimplexVolumeFormula {
  double value;
  /// π^{−1/2}(e/d)^{d/2}, the large-d equivalent.
  double asymptotic;
};

/// Expected volume of the simplex spanned by d+1 i.i.d. standard Gaussian
/// points in R^d: √(d+1) / (2^{d/2} Γ(d/2+1)).
SimplexVolumeFormula gaussian_simplex_expected_volume(int d);

/// Lower bound on the expected (d−1)-volume of d Gaussian points in R^{d−1}
/// truncated to a halfspace containing the origin:
/// √(1−2/π)·√d / (2^{(d+5)/2} Γ((d+1)/2)).
double truncated_simplex_lower_bound(int d);
double log_truncated_simplex_lower_bound(int d);

/// (∫ φ^p)^{1/p} over [−12, 12], scaled so p in the thousands does not underflow.
double normal_lp_norm(double p);

}  // namespace gpoly
