#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gpoly/linalg.hpp"

namespace gpoly {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct MaximizeResult {
  Vector argmax;
  double value = 0.0;
  /// Iterations spent in local refinement, summed over all starts.
  std::size_t refinements = 0;
  /// Largest grid spacing used by the initial scan.
  double grid_resolution = 0.0;
  /// Local optima whose value is within 1e-6 (relative) of the best, one per
  /// distinct basin; always contains argmax first.
  std::vector<Vector> near_optimal;
};

/// Grid scan followed by golden-section refinement around the best node.
/// grid_nodes is clamped to at least 2049.
MaximizeResult maximize_1d(const std::function<double(double)>& f, double a, double b,
                           std::size_t grid_nodes = 2049);

struct BoxSearchOptions {
  /// Nodes per axis in the initial scan, at least 64. Odd counts put a node
  /// on the centre of each axis.
  std::size_t nodes_per_axis = 65;
  /// Number of best grid nodes used as Nelder–Mead starting points.
  std::size_t starts = 8;
  std::size_t max_iterations = 4000;
};

/// Multi-start maximisation over a 1–3 dimensional box: a full grid scan and
/// box-clamped Nelder–Mead from the best nodes.
MaximizeResult maximize_box(const std::function<double(const Vector&)>& f, const std::vector<Interval>& box,
                            const BoxSearchOptions& options = {});

}  // namespace gpoly
