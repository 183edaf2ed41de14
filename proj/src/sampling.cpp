#include "gpoly/sampling.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "gpoly/error.hpp"

namespace gpoly {

PointSet::PointSet(Matrix coords, std::optional<Provenance> provenance)
    : coords_(std::move(coords)), provenance_(provenance) {
  if (coords_.rows() < 1 || coords_.cols() < 1) throw DimensionError("PointSet: need n >= 1 and d >= 1");
  if (!coords_.allFinite()) throw DomainError("PointSet: coordinates must be finite");
  const double norm = coords_.rowwise().norm().maxCoeff();
  scale_ = norm > 0.0 ? norm : 1.0;
}

PointSet gaussian_point_set(RngStream& rng, Eigen::Index n, Eigen::Index d) {
  if (n < 1 || d < 1) throw DimensionError("gaussian_point_set: need n >= 1 and d >= 1");
  Matrix coords(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) coords(i, j) = rng.normal();
  }
  return PointSet(std::move(coords), Provenance{rng.master_seed(), rng.stream_id()});
}

Vector unit_direction(RngStream& rng, Eigen::Index d) {
  if (d < 2) throw DimensionError("unit_direction: need d >= 2");
  Vector v(d);
  double norm = 0.0;
  do {
    for (Eigen::Index j = 0; j < d; ++j) v[j] = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

PointSet halfspace_truncated_gaussians(RngStream& rng, Eigen::Index d, double t, Eigen::Index count) {
  if (!(t >= 0.0)) throw DomainError("halfspace_truncated_gaussians: need t >= 0");
  if (d < 1 || count < 1) throw DimensionError("halfspace_truncated_gaussians: need d >= 1 and count >= 1");
  Matrix coords(count, d);
  for (Eigen::Index i = 0; i < count; ++i) {
    double first = rng.normal();
    while (first > t) first = rng.normal();
    coords(i, 0) = first;
    for (Eigen::Index j = 1; j < d; ++j) coords(i, j) = rng.normal();
  }
  return PointSet(std::move(coords), Provenance{rng.master_seed(), rng.stream_id()});
}

void write_point_set_csv(std::ostream& out, const PointSet& ps) {
  for (Eigen::Index j = 0; j < ps.d(); ++j) out << (j ? ",x" : "x") << (j + 1);
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < ps.n(); ++i) {
    for (Eigen::Index j = 0; j < ps.d(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ps.coords()(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

PointSet read_point_set_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("point set CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Eigen::Index d = 0;
  {
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) {
      if (field != "x" + std::to_string(d + 1)) throw DomainError("point set CSV: bad header field '" + field + "'");
      ++d;
    }
  }
  if (d == 0) throw DomainError("point set CSV: empty header");

  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    Eigen::Index cols = 0;
    while (std::getline(row, field, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw DomainError("point set CSV: cannot parse '" + field + "' on row " + std::to_string(rows + 1));
      }
      values.push_back(v);
      ++cols;
    }
    if (cols != d) throw DomainError("point set CSV: row " + std::to_string(rows + 1) + " has wrong field count");
    ++rows;
  }
  if (rows == 0) throw DomainError("point set CSV: no points");
  Matrix coords = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(), rows, d);
  return PointSet(std::move(coords));
}

}  // namespace gpoly
