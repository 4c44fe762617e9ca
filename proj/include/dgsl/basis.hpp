#pragma once

#include <array>
#include <span>
#include <vector>

#include "dgsl/geometry.hpp"

namespace dgsl {

/// Values and gradients of every basis function at a set of points,
/// stored point-major: entry (q, i) lives at q * dim + i.
struct BasisTable {
  int num_points = 0;
  int dim = 0;
  std::vector<double> values;
  std::vector<Vec2> gradients;

  double value(int q, int i) const { return values[q * dim + i]; }
  Vec2 gradient(int q, int i) const { return gradients[q * dim + i]; }
};

/// Nodal Lagrange basis of P_r on the reference triangle with vertices
/// (0,0), (1,0), (0,1), nodes on the principal lattice of degree r.
///
/// Node order: the three vertices, then the interior nodes of local edges
/// 0, 1, 2 (edge k is opposite vertex k, traversed from vertex k+1 to k+2),
/// then the element-interior nodes.
class ReferenceBasis {
public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  double value(int i, Vec2 p) const;
  Vec2 gradient(int i, Vec2 p) const;

  BasisTable tabulate(std::span<const Vec2> points) const;

private:
  int degree_;
  int dim_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 2>> exponents_;  // monomial x^a y^b
  std::vector<double> coeffs_;                 // coeffs_[m * dim + i]: monomial m in phi_i
};

inline constexpr int kMaxBasisDegree = 3;

/// Throws UnsupportedDegree unless 1 <= r <= 3.
ReferenceBasis make_basis(int r);

/// x = origin + jacobian * xi, mapping the reference triangle onto an element.
struct AffineMap {
  Vec2 origin;
  std::array<double, 4> jacobian{};      // row-major [[dx/dxi, dx/deta], [dy/dxi, dy/deta]]
  std::array<double, 4> inv_transpose{};  // J^{-T}, row-major
  double det = 0.0;

  static AffineMap from_vertices(Vec2 a, Vec2 b, Vec2 c);

  Vec2 apply(Vec2 xi) const {
    return {origin.x + jacobian[0] * xi.x + jacobian[1] * xi.y,
            origin.y + jacobian[2] * xi.x + jacobian[3] * xi.y};
  }
  Vec2 push_gradient(Vec2 g) const {
    return {inv_transpose[0] * g.x + inv_transpose[1] * g.y,
            inv_transpose[2] * g.x + inv_transpose[3] * g.y};
  }
};

/// Physical gradients J^{-T} grad(phi) at `points`; throws DegenerateElement if det <= 0.
std::vector<Vec2> physical_gradients(const ReferenceBasis& basis, const AffineMap& map,
                                     std::span<const Vec2> points);

/// Reference coordinates of the point at parameter t on local edge `local_edge`.
/// The edge runs from local vertex (k+1)%3 to (k+2)%3 unless `reversed`.
Vec2 reference_edge_point(int local_edge, double t, bool reversed);

/// Basis values and reference gradients at points of a local edge.
/// `reversed` flips the parametrization so both sides of a shared edge can be
/// sampled in the same global direction.
BasisTable trace_table(const ReferenceBasis& basis, int local_edge,
                       std::span<const double> edge_points, bool reversed = false);

}  // namespace dgsl
