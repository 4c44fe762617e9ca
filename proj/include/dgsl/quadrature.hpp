#pragma once

#include <vector>

#include "dgsl/geometry.hpp"

namespace dgsl {

/// Quadrature rule on the reference triangle {x, y >= 0, x + y <= 1}.
/// Weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Quadrature rule on the unit interval [0, 1]. Weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxTriangleDegree = 14;
inline constexpr int kMaxEdgeDegree = 20;

/// Collapsed (Duffy) Gauss rule exact for total degree <= `degree`.
/// All weights are positive. Throws UnsupportedDegree outside [1, 14].
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0, 1] exact for polynomials of degree <= `degree`.
/// Throws UnsupportedDegree outside [1, 20].
EdgeRule edge_rule(int degree);

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);

}  // namespace dgsl
