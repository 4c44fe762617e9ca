#include "dgsl/parallel.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dgsl {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double deterministic_dot(std::span<const double> a, std::span<const double> b) {
  constexpr long kChunk = 2048;
  const long n = static_cast<long>(a.size());
  const long chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static) if (chunks > 4)
  for (long c = 0; c < chunks; ++c) {
    const long end = std::min(n, (c + 1) * kChunk);
    double s = 0.0;
    for (long i = c * kChunk; i < end; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  return pairwise_sum(partial);
}

}  // namespace dgsl
