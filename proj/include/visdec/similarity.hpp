#pragma once

#include "visdec/types.hpp"

namespace visdec {

/// 1 / (1 + ||a - b||). Range (0, 1]; equals 1 exactly when a == b.
double euclidean_sim(const Vector& a, const Vector& b);

/// <a,b> / (||a|| ||b||). Throws for zero-norm inputs.
double cosine_sim(const Vector& a, const Vector& b);

/// Correlation: cosine of the two vectors after each is centered by its own
/// mean. Throws for constant vectors or lengths below 2.
double pearson_sim(const Vector& a, const Vector& b);

double similarity(Metric metric, const Vector& a, const Vector& b);

}  // namespace visdec
