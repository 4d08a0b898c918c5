#pragma once

#include <string_view>

#include "stylo/features.hpp"
#include "stylo/vector_view.hpp"

namespace stylo::distance {

enum class Metric { cosine, euclidean };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

// Fixed ascending-index accumulation; bit-identical under argument swap.
double dot(const FusedView& x, const FusedView& y);
double squared_norm(const FusedView& x);

// 1 - x.y / (|x||y|), clamped to [0, 2]. Throws Error{zero_vector} if either
// argument has zero norm.
double cosine_distance(const FusedView& x, const FusedView& y);
// |x - y|_2 over the fused representation.
double euclidean_distance(const FusedView& x, const FusedView& y);

double compute(Metric metric, const FusedView& x, const FusedView& y);

inline double cosine_distance(const features::StyleVector& x, const features::StyleVector& y) {
  return cosine_distance(x.view(), y.view());
}
inline double euclidean_distance(const features::StyleVector& x, const features::StyleVector& y) {
  return euclidean_distance(x.view(), y.view());
}
inline double compute(Metric metric, const features::StyleVector& x, const features::StyleVector& y) {
  return compute(metric, x.view(), y.view());
}

}  // namespace stylo::distance
