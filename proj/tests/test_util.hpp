#pragma once

#include <memory>
#include <random>

#include "dgsl/dg_space.hpp"
#include "dgsl/mesh.hpp"

namespace dgsl::test {

inline std::shared_ptr<const TriMesh> structured(int n) {
  return std::make_shared<const TriMesh>(build_structured(n));
}

inline DGVector random_field(const DGSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  DGVector v(space);
  for (double& c : v.values()) c = unit(rng);
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace dgsl::test
