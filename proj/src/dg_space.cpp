#include "dgsl/dg_space.hpp"

#include <string>

#include "dgsl/errors.hpp"

namespace dgsl {

DGSpace::DGSpace(std::shared_ptr<const TriMesh> mesh, int degree)
    : mesh_(std::move(mesh)), basis_(degree) {
  maps_.reserve(mesh_->num_elements());
  for (const auto& tri : mesh_->triangles()) {
    const auto& v = mesh_->vertices();
    maps_.push_back(AffineMap::from_vertices(v[tri[0]], v[tri[1]], v[tri[2]]));
    if (!(maps_.back().det > 0.0)) throw DegenerateElement("element with non-positive Jacobian");
  }
}

bool DGSpace::side_reversed(const EdgeSide& side) const {
  const auto& tri = mesh_->triangles()[side.element];
  const int start = tri[(side.local_edge + 1) % 3];
  const int e = mesh_->element_edge(side.element, side.local_edge);
  return start != mesh_->edges()[e].endpoints[0];
}

Vec2 DGSpace::edge_point(int e, double t) const {
  const auto& edge = mesh_->edges()[e];
  const Vec2 a = mesh_->vertices()[edge.endpoints[0]];
  const Vec2 b = mesh_->vertices()[edge.endpoints[1]];
  return a + t * (b - a);
}

VolumeTables DGSpace::volume_tables(int quad_degree) const {
  VolumeTables out{triangle_rule(quad_degree), {}};
  out.table = basis_.tabulate(out.rule.points);
  return out;
}

TraceTables DGSpace::trace_tables(int quad_degree) const {
  TraceTables out{edge_rule(quad_degree), {}};
  for (int k = 0; k < 3; ++k) {
    out.tables[2 * k] = trace_table(basis_, k, out.rule.points, false);
    out.tables[2 * k + 1] = trace_table(basis_, k, out.rule.points, true);
  }
  return out;
}

void check_compatible(const DGSpace& space, const DGVector& v) {
  if (v.size() != static_cast<std::size_t>(space.total_dofs())) {
    throw InvalidArgument("vector of length " + std::to_string(v.size()) +
                          " does not match space with " + std::to_string(space.total_dofs()) +
                          " dofs");
  }
}

DGVector interpolate(const DGSpace& space, const ScalarField& u) {
  DGVector out(space);
  const auto& nodes = space.basis().nodes();
  for (int k = 0; k < space.num_elements(); ++k) {
    const auto& map = space.map(k);
    const int off = space.dof_offset(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) out[off + i] = u(map.apply(nodes[i]));
  }
  return out;
}

std::vector<FieldSample> evaluate(const DGSpace& space, const DGVector& v, int element,
                                  std::span<const Vec2> reference_points) {
  check_compatible(space, v);
  if (element < 0 || element >= space.num_elements()) {
    throw IndexOutOfRange("element " + std::to_string(element) + " out of range");
  }
  const auto& basis = space.basis();
  const auto& map = space.map(element);
  const auto coeffs = v.block(space, element);
  std::vector<FieldSample> out;
  out.reserve(reference_points.size());
  for (const Vec2 p : reference_points) {
    FieldSample s;
    Vec2 ref_grad;
    for (int i = 0; i < basis.dim(); ++i) {
      s.value += coeffs[i] * basis.value(i, p);
      ref_grad += coeffs[i] * basis.gradient(i, p);
    }
    s.gradient = map.push_gradient(ref_grad);
    out.push_back(s);
  }
  return out;
}

namespace {

FieldSample trace_sample(const DGSpace& space, const DGVector& v, const EdgeSide& side, double t) {
  const Vec2 ref = reference_edge_point(side.local_edge, t, space.side_reversed(side));
  return evaluate(space, v, side.element, std::span<const Vec2>(&ref, 1)).front();
}

}  // namespace

std::vector<TraceSample> edge_jump_average(const DGSpace& space, const DGVector& v, int edge,
                                           std::span<const double> edge_points) {
  check_compatible(space, v);
  if (edge < 0 || edge >= space.mesh().num_edges()) {
    throw IndexOutOfRange("edge " + std::to_string(edge) + " out of range");
  }
  const Edge& e = space.mesh().edges()[edge];
  const Vec2 n = e.normal;
  std::vector<TraceSample> out;
  out.reserve(edge_points.size());
  for (double t : edge_points) {
    TraceSample s;
    s.point = space.edge_point(edge, t);
    const FieldSample p = trace_sample(space, v, e.plus, t);
    if (e.minus) {
      const FieldSample m = trace_sample(space, v, *e.minus, t);
      s.jump = (p.value - m.value) * n;
      s.average = 0.5 * (p.value + m.value);
      s.grad_jump = dot(p.gradient - m.gradient, n);
      s.grad_average = 0.5 * (p.gradient + m.gradient);
    } else {
      s.jump = p.value * n;
      s.average = p.value;
      s.grad_jump = dot(p.gradient, n);
      s.grad_average = p.gradient;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace dgsl
