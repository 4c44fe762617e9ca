#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgsl/geometry.hpp"

namespace dgsl {

using Triangle = std::array<int, 3>;

/// One side of an edge: the owning triangle and the local edge index there.
/// Local edge k of a triangle is the side opposite its local vertex k.
struct EdgeSide {
  int element = -1;
  int local_edge = -1;
};

struct Edge {
  std::array<int, 2> endpoints{};  // global vertex ids, endpoints[0] < endpoints[1]
  double length = 0.0;
  EdgeSide plus;                   // K_+, the lower triangle index
  std::optional<EdgeSide> minus;   // K_-, absent on the boundary
  Vec2 normal;                     // unit normal pointing out of K_+

  bool is_boundary() const { return !minus.has_value(); }
};

/// Conforming triangulation with derived edge topology.
///
/// Immutable after construction. Triangles are stored counter-clockwise;
/// construction reorients clockwise input and rejects zero-area triangles,
/// duplicated triangles, and edges shared by more than two triangles or by
/// two triangles lying on the same side of the edge.
class TriMesh {
public:
  TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
          std::optional<double> nominal_h = std::nullopt);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const { return num_boundary_edges_; }
  int num_interior_edges() const { return num_edges() - num_boundary_edges_; }

  /// Global edge index of local edge `k` of triangle `t`.
  int element_edge(int t, int k) const { return element_edges_[t][k]; }

  double area(int t) const { return areas_[t]; }
  /// Element diameter h_K (longest side).
  double diameter(int t) const { return diameters_[t]; }
  Vec2 centroid(int t) const;

  double h_max() const { return h_max_; }
  double h_min_element() const;
  /// Mesh size used in convergence tables: 1/n for structured meshes, h_max otherwise.
  double nominal_h() const { return nominal_h_.value_or(h_max_); }

  double total_area() const;

private:
  void build_edges();

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  double h_max_ = 0.0;
  int num_boundary_edges_ = 0;
  std::optional<double> nominal_h_;
};

/// Unit square split into n x n cells, each cut along its lower-left to
/// upper-right diagonal.
TriMesh build_structured(int n);

/// Structured mesh with interior vertices displaced by a seeded uniform offset
/// in [-amplitude/n, amplitude/n] per coordinate. Requires 0 <= amplitude <= 0.3.
TriMesh build_perturbed(int n, double amplitude, std::uint64_t seed);

/// Parses the plain-text mesh format:
///   nv nt
///   x y          (nv lines)
///   i j k        (nt lines, 0-based)
/// Lines starting with '#' are comments.
TriMesh import_mesh(std::string_view text);
TriMesh read_mesh_file(const std::string& path);

/// Writes `mesh` in the format read by import_mesh, with round-trip precision.
std::string export_mesh(const TriMesh& mesh);

}  // namespace dgsl
