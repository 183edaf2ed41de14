#include "gpoly/optimize.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "gpoly/error.hpp"

namespace gpoly {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;  // 1/φ
constexpr double kNearOptimalRel = 1e-6;

struct GoldenResult {
  double x;
  double value;
  std::size_t iterations;
};

GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  std::size_t it = 0;
  while (hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)) && it < 200) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
    ++it;
  }
  return f1 >= f2 ? GoldenResult{x1, f1, it} : GoldenResult{x2, f2, it};
}

Vector clamp_to(const Vector& x, const std::vector<Interval>& box) {
  Vector y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], box[i].lo, box[i].hi);
  return y;
}

struct LocalResult {
  Vector x;
  double value;
  std::size_t iterations;
};

// Nelder–Mead on −f with every trial point projected back into the box.
LocalResult nelder_mead(const std::function<double(const Vector&)>& f, const std::vector<Interval>& box,
                        const Vector& start, const Vector& step, std::size_t max_iterations) {
  const Eigen::Index n = start.size();
  std::vector<Vector> simplex(n + 1, start);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector& v = simplex[j + 1];
    v[j] += step[j];
    if (v[j] > box[j].hi) v[j] = start[j] - step[j];
    v = clamp_to(v, box);
  }
  std::vector<double> val(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto evaluate = [&](const Vector& x) {
    Vector y = clamp_to(x, box);
    const double v = f(y);
    return std::pair{y, v};
  };

  std::size_t it = 0;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) diameter = std::max(diameter, (simplex[i] - simplex[best]).cwiseAbs().maxCoeff());
    const double spread = val[best] - val[worst];
    if (diameter <= 1e-11 && spread <= 1e-16 * (std::abs(val[best]) + 1e-300)) break;
    if (diameter <= 1e-13) break;

    Vector centroid = Vector::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (static_cast<std::size_t>(i) != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    auto [xr, fr] = evaluate(centroid + (centroid - simplex[worst]));
    if (fr > val[best]) {
      auto [xe, fe] = evaluate(centroid + 2.0 * (centroid - simplex[worst]));
      if (fe > fr) {
        simplex[worst] = xe;
        val[worst] = fe;
      } else {
        simplex[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr > val[second_worst]) {
      simplex[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr > val[worst];
    auto [xc, fc] = outside ? evaluate(centroid + 0.5 * (xr - centroid))
                            : evaluate(centroid + 0.5 * (simplex[worst] - centroid));
    if (outside ? fc >= fr : fc > val[worst]) {
      simplex[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (static_cast<std::size_t>(i) == best) continue;
      auto [xs, fs] = evaluate(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
      simplex[i] = xs;
      val[i] = fs;
    }
  }
  const auto top = static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin());
  return {simplex[top], val[top], it};
}

void validate_box(const std::vector<Interval>& box) {
  if (box.empty() || box.size() > 3) {
    throw DomainError("maximize_box: box must have 1 to 3 dimensions, got " + std::to_string(box.size()));
  }
  for (const Interval& iv : box) {
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw DomainError("maximize_box: malformed interval");
    }
  }
}

}  // namespace

MaximizeResult maximize_1d(const std::function<double(double)>& f, double a, double b, std::size_t grid_nodes) {
  if (!(a < b)) throw DomainError("maximize_1d: need a < b");
  const std::size_t nodes = std::max<std::size_t>(grid_nodes, 2049);
  const double h = (b - a) / static_cast<double>(nodes - 1);

  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = i + 1 == nodes ? b : a + h * static_cast<double>(i);
    const double v = f(x);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double x_best = best + 1 == nodes ? b : a + h * static_cast<double>(best);
  const GoldenResult g = golden_section(f, std::max(a, x_best - h), std::min(b, x_best + h));

  MaximizeResult out;
  out.argmax = Vector::Constant(1, g.value > best_value ? g.x : x_best);
  out.value = std::max(g.value, best_value);
  out.refinements = g.iterations;
  out.grid_resolution = h;
  out.near_optimal = {out.argmax};
  return out;
}

MaximizeResult maximize_box(const std::function<double(const Vector&)>& f, const std::vector<Interval>& box,
                            const BoxSearchOptions& options) {
  validate_box(box);
  const auto dims = static_cast<Eigen::Index>(box.size());
  const std::size_t nodes = std::max<std::size_t>(options.nodes_per_axis, 64);

  Vector spacing(dims);
  for (Eigen::Index j = 0; j < dims; ++j) spacing[j] = box[j].width() / static_cast<double>(nodes - 1);
  auto node = [&](std::size_t flat) {
    Vector x(dims);
    for (Eigen::Index j = 0; j < dims; ++j) {
      const std::size_t i = flat % nodes;
      flat /= nodes;
      x[j] = i + 1 == nodes ? box[j].hi : box[j].lo + spacing[j] * static_cast<double>(i);
    }
    return x;
  };

  std::size_t total = 1;
  for (Eigen::Index j = 0; j < dims; ++j) total *= nodes;
  std::vector<double> grid(total);
  for (std::size_t flat = 0; flat < total; ++flat) grid[flat] = f(node(flat));

  const std::size_t starts = std::min(std::max<std::size_t>(options.starts, 1), total);
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(starts), idx.end(),
                    [&](std::size_t a, std::size_t b) { return grid[a] > grid[b] || (grid[a] == grid[b] && a < b); });

  MaximizeResult out;
  out.grid_resolution = spacing.maxCoeff();
  out.argmax = node(idx.front());
  out.value = grid[idx.front()];

  std::vector<LocalResult> locals;
  for (std::size_t s = 0; s < starts; ++s) {
    const Vector x0 = node(idx[s]);
    LocalResult local = nelder_mead(f, box, x0, spacing, options.max_iterations);
    if (grid[idx[s]] > local.value) local = {x0, grid[idx[s]], local.iterations};
    out.refinements += local.iterations;
    if (local.value > out.value) {
      out.value = local.value;
      out.argmax = local.x;
    }
    locals.push_back(std::move(local));
  }

  out.near_optimal = {out.argmax};
  const double cutoff = out.value - kNearOptimalRel * std::abs(out.value);
  for (const LocalResult& local : locals) {
    if (local.value < cutoff) continue;
    const bool seen = std::any_of(out.near_optimal.begin(), out.near_optimal.end(), [&](const Vector& v) {
      return ((v - local.x).cwiseAbs().array() <= spacing.array()).all();
    });
    if (!seen) out.near_optimal.push_back(local.x);
  }
  return out;
}

}  // namespace gpoly
