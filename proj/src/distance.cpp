#include "stylo/distance.hpp"

#include <algorithm>
#include <cmath>

#include "stylo/error.hpp"

namespace stylo::distance {

std::string_view to_string(Metric m) { return m == Metric::cosine ? "cosine" : "euclidean"; }

Metric parse_metric(std::string_view s) {
  if (s == "cosine") return Metric::cosine;
  if (s == "euclidean") return Metric::euclidean;
  throw Error(ErrorKind::invalid_config, "unknown metric '" + std::string(s) + "'");
}

double dot(const FusedView& x, const FusedView& y) {
  double acc = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& xi = x.sparse_indices;
  const auto& yi = y.sparse_indices;
  while (i < xi.size() && j < yi.size()) {
    if (xi[i] < yi[j]) {
      ++i;
    } else if (yi[j] < xi[i]) {
      ++j;
    } else {
      acc += x.sparse_values[i] * y.sparse_values[j];
      ++i;
      ++j;
    }
  }
  const std::size_t n = std::min(x.dense.size(), y.dense.size());
  for (std::size_t k = 0; k < n; ++k) acc += x.dense[k] * y.dense[k];
  return acc;
}

double squared_norm(const FusedView& x) { return dot(x, x); }

double cosine_distance(const FusedView& x, const FusedView& y) {
  const double nx = squared_norm(x);
  const double ny = squared_norm(y);
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorKind::zero_vector, "cosine distance of a zero vector");
  const double cos = std::clamp(dot(x, y) / std::sqrt(nx * ny), -1.0, 1.0);
  return 1.0 - cos;
}

double euclidean_distance(const FusedView& x, const FusedView& y) {
  double acc = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& xi = x.sparse_indices;
  const auto& yi = y.sparse_indices;
  auto add = [&](double d) { acc += d * d; };
  while (i < xi.size() || j < yi.size()) {
    if (j == yi.size() || (i < xi.size() && xi[i] < yi[j])) {
      add(x.sparse_values[i++]);
    } else if (i == xi.size() || yi[j] < xi[i]) {
      add(y.sparse_values[j++]);
    } else {
      add(x.sparse_values[i++] - y.sparse_values[j++]);
    }
  }
  const std::size_t n = std::max(x.dense.size(), y.dense.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < x.dense.size() ? x.dense[k] : 0.0;
    const double b = k < y.dense.size() ? y.dense[k] : 0.0;
    add(a - b);
  }
  return std::sqrt(acc);
}

double compute(Metric metric, const FusedView& x, const FusedView& y) {
  return metric == Metric::cosine ? cosine_distance(x, y) : euclidean_distance(x, y);
}

}  // namespace stylo::distance
