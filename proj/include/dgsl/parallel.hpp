#pragma once

#include <span>

namespace dgsl {

/// Number of worker threads the parallel kernels will use.
int max_threads();

/// Recursive pairwise sum; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Dot product with a fixed chunking so the result is bit-identical for any
/// thread count.
double deterministic_dot(std::span<const double> a, std::span<const double> b);

}  // namespace dgsl
