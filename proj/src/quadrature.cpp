#include "gpoly/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gpoly/error.hpp"

namespace gpoly {

namespace {

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw DomainError("integrate_1d: integrand is not finite at x=" + std::to_string(x));
  return v;
}

// One 15-point Kronrod panel with the QUADPACK error heuristic.
Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 7> lo{};
  std::array<double, 7> hi{};
  const double fc = checked(f, centre);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    lo[j] = checked(f, centre - dx);
    hi[j] = checked(f, centre + dx);
    const double sum = lo[j] + hi[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(lo[j]) + std::abs(hi[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) res_asc += kWgk[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));

  const double width = std::abs(half);
  res_abs *= width;
  res_asc *= width;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return {a, b, res_k * half, err};
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& options) {
  if (!(a < b)) throw DomainError("integrate_1d: need a < b");
  if (!(options.rel_tol >= 1e-13)) throw DomainError("integrate_1d: rel_tol must be >= 1e-13");

  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap{kronrod15(f, a, b)};
  std::size_t evaluations = 15;
  double value = heap.front().value;
  double error = heap.front().error;

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };

  while (error > target()) {
    if (heap.size() >= options.max_intervals) {
      throw ConvergenceError("integrate_1d: no convergence after " + std::to_string(heap.size()) +
                                 " subintervals (value " + std::to_string(value) + ", error " +
                                 std::to_string(error) + ")",
                             value, error);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  for (const Panel& p : heap) {
    value += p.value;
    error += p.error;
  }
  return {value, error, evaluations};
}

}  // namespace gpoly
