#pragma once

// Small dense linear algebra on Eigen types. Everything here is templated on
// the expression type so fixed-size and dynamic matrices both work.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "gpoly/error.hpp"

namespace gpoly {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative pivot magnitude below which a matrix is treated as singular.
inline constexpr double kPivotTolerance = 1e-12;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(op) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

// Partial-pivot LU plus the singularity verdict at kPivotTolerance relative to
// the largest row norm.
template <typename Derived>
auto pivoted_lu(const Eigen::MatrixBase<Derived>& a, bool& singular) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::PartialPivLU<Dense> lu(a.eval());
  const Scalar scale = a.rowwise().norm().maxCoeff();
  const Scalar smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  singular = !(smallest > Scalar(kPivotTolerance) * scale);
  return lu;
}

}  // namespace detail

/// Solves a·x = b by LU with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below 1e-12 × the largest row norm.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> solve_linear(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_square(a, "solve_linear");
  if (b.cols() != 1 || b.rows() != a.rows()) {
    throw DimensionError("solve_linear: right-hand side has " + std::to_string(b.rows()) +
                         " rows, matrix has " + std::to_string(a.rows()));
  }
  if (a.rows() == 0) return {};
  bool singular = false;
  auto lu = detail::pivoted_lu(a, singular);
  if (singular) throw SingularMatrixError("solve_linear: matrix is numerically singular");
  return lu.solve(b.eval());
}

/// LU determinant. Numerically singular matrices (same pivot rule as
/// solve_linear) report exactly zero.
template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "determinant");
  if (a.rows() == 0) return Scalar(1);
  bool singular = false;
  auto lu = detail::pivoted_lu(a, singular);
  return singular ? Scalar(0) : lu.determinant();
}

/// k-dimensional volume of the simplex spanned by k+1 points, given as the
/// columns of an m×(k+1) matrix with k ≤ m.
///
/// Full-dimensional simplices (k = m) append a row of ones and use
/// |det W| / k!. Lower-dimensional ones go through the Gram determinant of the
/// edge vectors, √det(DᵀD) / k!, which is what the d points of a facet in R^d
/// need.
template <typename Derived>
typename Derived::Scalar simplex_volume(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = points.rows();
  const Eigen::Index cols = points.cols();
  if (cols == 0) throw DimensionError("simplex_volume: no points");
  const Eigen::Index k = cols - 1;
  if (k > m) {
    throw DimensionError("simplex_volume: " + std::to_string(cols) + " points do not span a simplex in R^" +
                         std::to_string(m));
  }
  Scalar factorial(1);
  for (Eigen::Index i = 2; i <= k; ++i) factorial *= Scalar(i);
  if (k == 0) return Scalar(1);

  if (k == m) {
    Dense w(m + 1, cols);
    w.topRows(m) = points;
    w.row(m).setOnes();
    return std::abs(determinant(w)) / factorial;
  }
  const Dense edges = points.rightCols(k).colwise() - points.col(0);
  const Dense gram = edges.transpose() * edges;
  const Scalar g = determinant(gram);
  return g > Scalar(0) ? std::sqrt(g) / factorial : Scalar(0);
}

}  // namespace gpoly
