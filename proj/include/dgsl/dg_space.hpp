#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dgsl/basis.hpp"
#include "dgsl/mesh.hpp"
#include "dgsl/quadrature.hpp"

namespace dgsl {

using ScalarField = std::function<double(Vec2)>;

/// Basis tables at the points of a triangle rule.
struct VolumeTables {
  TriangleRule rule;
  BasisTable table;
};

/// Basis traces on each local edge, in both parametrization directions.
struct TraceTables {
  EdgeRule rule;
  std::array<BasisTable, 6> tables;

  const BasisTable& get(int local_edge, bool reversed) const {
    return tables[2 * local_edge + (reversed ? 1 : 0)];
  }
};

/// Discontinuous piecewise-P_r space on a triangulation.
///
/// Each element owns a contiguous block of dofs_per_element() coefficients;
/// no coefficient is shared between elements.
class DGSpace {
public:
  DGSpace(std::shared_ptr<const TriMesh> mesh, int degree);

  const TriMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TriMesh> mesh_ptr() const { return mesh_; }
  int degree() const { return basis_.degree(); }
  const ReferenceBasis& basis() const { return basis_; }

  int dofs_per_element() const { return basis_.dim(); }
  int num_elements() const { return mesh_->num_elements(); }
  int total_dofs() const { return num_elements() * dofs_per_element(); }
  int dof_offset(int element) const { return element * dofs_per_element(); }

  const AffineMap& map(int element) const { return maps_[element]; }

  /// True if the local parametrization of `side` runs against the global edge
  /// direction (lower vertex id to higher vertex id).
  bool side_reversed(const EdgeSide& side) const;

  /// Physical point at parameter t along the global direction of edge `e`.
  Vec2 edge_point(int e, double t) const;

  VolumeTables volume_tables(int quad_degree) const;
  TraceTables trace_tables(int quad_degree) const;

private:
  std::shared_ptr<const TriMesh> mesh_;
  ReferenceBasis basis_;
  std::vector<AffineMap> maps_;
};

/// Coefficient vector of a field in a DGSpace.
class DGVector {
public:
  DGVector() = default;
  explicit DGVector(const DGSpace& space) : coeffs_(space.total_dofs(), 0.0) {}
  explicit DGVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  std::size_t size() const { return coeffs_.size(); }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  std::vector<double>& values() { return coeffs_; }
  const std::vector<double>& values() const { return coeffs_; }

  std::span<const double> block(const DGSpace& space, int element) const {
    return {coeffs_.data() + space.dof_offset(element),
            static_cast<std::size_t>(space.dofs_per_element())};
  }

private:
  std::vector<double> coeffs_;
};

/// Throws InvalidArgument if `v` does not match `space`.
void check_compatible(const DGSpace& space, const DGVector& v);

/// Nodal interpolant: coefficients are values of `u` at the element nodes.
DGVector interpolate(const DGSpace& space, const ScalarField& u);

struct FieldSample {
  double value = 0.0;
  Vec2 gradient;
};

/// Value and physical gradient of `v` at reference-coordinate points of an element.
std::vector<FieldSample> evaluate(const DGSpace& space, const DGVector& v, int element,
                                  std::span<const Vec2> reference_points);

/// Jump and average data on an edge. On boundary edges [v] = v n, {v} = v,
/// {grad v} = grad v and [grad v] = grad v . n.
struct TraceSample {
  Vec2 point;
  Vec2 jump;            // [v] = v_+ n_+ + v_- n_-
  double average = 0.0;  // {v}
  double grad_jump = 0.0;  // [grad v] = grad v_+ . n_+ + grad v_- . n_-
  Vec2 grad_average;       // {grad v}
};

/// `edge_points` are parameters in [0, 1] along the global edge direction.
std::vector<TraceSample> edge_jump_average(const DGSpace& space, const DGVector& v, int edge,
                                           std::span<const double> edge_points);

}  // namespace dgsl
