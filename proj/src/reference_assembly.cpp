#include <algorithm>
#include <tuple>

#include "dgsl/assembly.hpp"

namespace dgsl::reference {

namespace {

struct Triplet {
  int row;
  int col;
  double value;
};

// Reference coordinates of physical point x in element k.
Vec2 pull_back(const AffineMap& map, Vec2 x) {
  const Vec2 d = x - map.origin;
  // J^{-1} = (J^{-T})^T
  return {map.inv_transpose[0] * d.x + map.inv_transpose[2] * d.y,
          map.inv_transpose[1] * d.x + map.inv_transpose[3] * d.y};
}

SparseSymMatrix to_csr(int dim, int block_size, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<int> row_ptr(dim + 1, 0);
  std::vector<int> cols;
  std::vector<double> values;
  for (std::size_t p = 0; p < triplets.size();) {
    const int row = triplets[p].row;
    const int col = triplets[p].col;
    double sum = 0.0;
    for (; p < triplets.size() && triplets[p].row == row && triplets[p].col == col; ++p) {
      sum += triplets[p].value;
    }
    cols.push_back(col);
    values.push_back(sum);
    ++row_ptr[row + 1];
  }
  for (int i = 0; i < dim; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseSymMatrix(dim, std::move(row_ptr), std::move(cols), std::move(values), block_size);
}

}  // namespace

SparseSymMatrix assemble_bilinear(const DGSpace& space, const AssemblyConfig& cfg,
                                  FormTerms terms) {
  cfg.validate();
  const TriMesh& mesh = space.mesh();
  const ReferenceBasis& basis = space.basis();
  const int nd = basis.dim();
  const int r = space.degree();
  std::vector<Triplet> triplets;

  // Volume term, element by element.
  const TriangleRule vrule = triangle_rule(cfg.volume_quad(r));
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) {
        double sum = 0.0;
        if (terms.volume) {
          for (int q = 0; q < vrule.size(); ++q) {
            const Vec2 p = vrule.points[q];
            sum += vrule.weights[q] * map.det *
                   dot(map.push_gradient(basis.gradient(i, p)), map.push_gradient(basis.gradient(j, p)));
          }
        }
        triplets.push_back({space.dof_offset(k) + i, space.dof_offset(k) + j, sum});
      }
    }
  }

  // Edge terms, one visit per edge.
  const EdgeRule erule = edge_rule(cfg.edge_quad(r));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const Vec2 a = mesh.vertices()[edge.endpoints[0]];
    const Vec2 b = mesh.vertices()[edge.endpoints[1]];
    std::vector<int> elems = {edge.plus.element};
    std::vector<Vec2> normals = {edge.normal};
    if (edge.minus) {
      elems.push_back(edge.minus->element);
      normals.push_back(-edge.normal);
    }
    const double avg = edge.minus ? 0.5 : 1.0;
    for (std::size_t s = 0; s < elems.size(); ++s) {
      for (std::size_t t = 0; t < elems.size(); ++t) {
        const AffineMap& ms = space.map(elems[s]);
        const AffineMap& mt = space.map(elems[t]);
        for (int i = 0; i < nd; ++i) {
          for (int j = 0; j < nd; ++j) {
            double sum = 0.0;
            for (int q = 0; q < erule.size(); ++q) {
              const Vec2 x = a + erule.points[q] * (b - a);
              const Vec2 ps = pull_back(ms, x);
              const Vec2 pt = pull_back(mt, x);
              const double v = basis.value(i, ps);  // test function on side s
              const double w = basis.value(j, pt);  // trial function on side t
              const Vec2 gv = ms.push_gradient(basis.gradient(i, ps));
              const Vec2 gw = mt.push_gradient(basis.gradient(j, pt));
              const Vec2 jump_v = v * normals[s];
              const Vec2 jump_w = w * normals[t];
              double integrand = 0.0;
              if (terms.consistency) {
                integrand -= dot(avg * gw, jump_v) + dot(avg * gv, jump_w);
              }
              if (terms.penalty) integrand += cfg.penalty / edge.length * dot(jump_w, jump_v);
              sum += erule.weights[q] * edge.length * integrand;
            }
            triplets.push_back({space.dof_offset(elems[s]) + i, space.dof_offset(elems[t]) + j, sum});
          }
        }
      }
    }
  }
  return to_csr(space.total_dofs(), nd, std::move(triplets));
}

std::vector<double> assemble_nonlinear_load(const DGSpace& space, const DGVector& u,
                                            const Problem& problem, const AssemblyConfig& cfg) {
  check_compatible(space, u);
  const ReferenceBasis& basis = space.basis();
  const TriangleRule rule = triangle_rule(cfg.volume_quad(space.degree()));
  std::vector<double> b(space.total_dofs(), 0.0);
  for (int k = 0; k < space.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    const auto coeffs = u.block(space, k);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 p = rule.points[q];
      double uq = 0.0;
      for (int j = 0; j < basis.dim(); ++j) uq += coeffs[j] * basis.value(j, p);
      const double fq = problem.f(map.apply(p), uq);
      for (int i = 0; i < basis.dim(); ++i) {
        b[space.dof_offset(k) + i] += rule.weights[q] * map.det * fq * basis.value(i, p);
      }
    }
  }
  return b;
}

}  // namespace dgsl::reference
