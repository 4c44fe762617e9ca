#include "dgsl/assembly.hpp"

#include <algorithm>
#include <array>

#include "dgsl/errors.hpp"

namespace dgsl {

void AssemblyConfig::validate() const {
  if (!(penalty > 0.0)) throw InvalidArgument("penalty parameter must be positive");
}

namespace {

// Sorted list of the elements coupled to K (K itself and its edge neighbours).
struct Coupling {
  std::array<int, 4> elements{};
  int count = 0;

  int position(int element) const {
    for (int p = 0; p < count; ++p) {
      if (elements[p] == element) return p;
    }
    return -1;
  }
};

std::vector<Coupling> element_couplings(const TriMesh& mesh) {
  std::vector<Coupling> out(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    Coupling& c = out[k];
    c.elements[c.count++] = k;
    for (int l = 0; l < 3; ++l) {
      const Edge& e = mesh.edges()[mesh.element_edge(k, l)];
      if (!e.minus) continue;
      c.elements[c.count++] = e.plus.element == k ? e.minus->element : e.plus.element;
    }
    std::sort(c.elements.begin(), c.elements.begin() + c.count);
  }
  return out;
}

// Adds an nd x nd row-major block to block (K, L) of a matrix with dg_block_pattern.
void add_block(SparseSymMatrix& m, const Coupling& row_coupling, int nd, int k, int l,
               const double* block) {
  const int p = row_coupling.position(l);
  auto& values = m.values();
  const auto& row_ptr = m.row_ptr();
  for (int i = 0; i < nd; ++i) {
    double* dst = values.data() + row_ptr[k * nd + i] + p * nd;
    for (int j = 0; j < nd; ++j) dst[j] += block[i * nd + j];
  }
}

struct EdgeWeights {
  double consistency = 0.0;  // multiplies -{grad w}.[v] - {grad v}.[w]
  double penalty = 0.0;      // jump term weight is penalty / h_e
  double grad_average = 0.0;  // {grad w}.{grad v} term weight is grad_average * h_e
};

// Edge contributions, four nd x nd blocks (side a, side b) in the order
// (+,+), (+,-), (-,+), (-,-); boundary edges fill only the first.
void edge_blocks(const DGSpace& space, int e, const TraceTables& traces, const EdgeWeights& w,
                 double* out) {
  const TriMesh& mesh = space.mesh();
  const Edge& edge = mesh.edges()[e];
  const int nd = space.dofs_per_element();
  const int nsides = edge.minus ? 2 : 1;
  const double avg = edge.minus ? 0.5 : 1.0;
  const double sign[2] = {1.0, -1.0};
  const double jump_w = w.penalty / edge.length;
  const double grad_w = w.grad_average * edge.length;

  std::array<const BasisTable*, 2> tables{};
  std::array<const AffineMap*, 2> maps{};
  const EdgeSide sides[2] = {edge.plus, edge.minus.value_or(EdgeSide{})};
  for (int s = 0; s < nsides; ++s) {
    tables[s] = &traces.get(sides[s].local_edge, space.side_reversed(sides[s]));
    maps[s] = &space.map(sides[s].element);
  }

  std::fill(out, out + 4 * nd * nd, 0.0);
  std::array<std::array<double, 10>, 2> phi{};
  std::array<std::array<double, 10>, 2> dn{};
  std::array<std::array<Vec2, 10>, 2> grad{};
  for (int q = 0; q < traces.rule.size(); ++q) {
    const double wq = traces.rule.weights[q] * edge.length;
    for (int s = 0; s < nsides; ++s) {
      for (int i = 0; i < nd; ++i) {
        phi[s][i] = tables[s]->value(q, i);
        grad[s][i] = maps[s]->push_gradient(tables[s]->gradient(q, i));
        dn[s][i] = dot(grad[s][i], edge.normal);
      }
    }
    for (int a = 0; a < nsides; ++a) {
      for (int b = 0; b < nsides; ++b) {
        double* block = out + (2 * a + b) * nd * nd;
        for (int i = 0; i < nd; ++i) {
          for (int j = 0; j < nd; ++j) {
            const double consistency =
                -avg * (dn[b][j] * sign[a] * phi[a][i] + dn[a][i] * sign[b] * phi[b][j]);
            const double jump = sign[a] * sign[b] * phi[a][i] * phi[b][j];
            const double gavg = avg * avg * dot(grad[a][i], grad[b][j]);
            block[i * nd + j] +=
                wq * (w.consistency * consistency + jump_w * jump + grad_w * gavg);
          }
        }
      }
    }
  }
}

void element_stiffness(const DGSpace& space, int k, const VolumeTables& vt, double* out) {
  const int nd = space.dofs_per_element();
  const AffineMap& map = space.map(k);
  std::array<Vec2, 10> grad{};
  std::fill(out, out + nd * nd, 0.0);
  for (int q = 0; q < vt.rule.size(); ++q) {
    const double wq = vt.rule.weights[q] * map.det;
    for (int i = 0; i < nd; ++i) grad[i] = map.push_gradient(vt.table.gradient(q, i));
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) out[i * nd + j] += wq * dot(grad[i], grad[j]);
    }
  }
}

// Weighted element mass; `weight_at(q, x)` gives the weight at quadrature point q.
template <class Weight>
void element_mass(const DGSpace& space, int k, const VolumeTables& vt, Weight&& weight_at,
                  double* out) {
  const int nd = space.dofs_per_element();
  const AffineMap& map = space.map(k);
  std::fill(out, out + nd * nd, 0.0);
  for (int q = 0; q < vt.rule.size(); ++q) {
    const double wq = vt.rule.weights[q] * map.det * weight_at(q, map.apply(vt.rule.points[q]));
    for (int i = 0; i < nd; ++i) {
      const double pi = vt.table.value(q, i);
      for (int j = 0; j < nd; ++j) out[i * nd + j] += wq * pi * vt.table.value(q, j);
    }
  }
}

double field_value(const BasisTable& table, int q, std::span<const double> coeffs) {
  double u = 0.0;
  for (int i = 0; i < table.dim; ++i) u += coeffs[i] * table.value(q, i);
  return u;
}

// Generic two-pass assembly: edge blocks computed in parallel into a buffer,
// then each element gathers its own rows. Rows are written by exactly one
// thread and in a fixed order, so the result does not depend on scheduling.
SparseSymMatrix assemble_operator(const DGSpace& space, bool stiffness, const EdgeWeights& ew,
                                  int volume_degree, int edge_degree) {
  const TriMesh& mesh = space.mesh();
  const int nd = space.dofs_per_element();
  const int nblock = nd * nd;
  SparseSymMatrix m = dg_block_pattern(space);
  const auto couplings = element_couplings(mesh);

  const bool with_edges = ew.consistency != 0.0 || ew.penalty != 0.0 || ew.grad_average != 0.0;
  std::vector<double> edge_buffer;
  if (with_edges) {
    const TraceTables traces = space.trace_tables(edge_degree);
    edge_buffer.resize(static_cast<std::size_t>(mesh.num_edges()) * 4 * nblock);
#pragma omp parallel for schedule(static)
    for (int e = 0; e < mesh.num_edges(); ++e) {
      edge_blocks(space, e, traces, ew, edge_buffer.data() + static_cast<std::size_t>(e) * 4 * nblock);
    }
  }

  const VolumeTables vt = space.volume_tables(volume_degree);
#pragma omp parallel
  {
    std::vector<double> local(nblock);
#pragma omp for schedule(static)
    for (int k = 0; k < mesh.num_elements(); ++k) {
      if (stiffness) {
        element_stiffness(space, k, vt, local.data());
        add_block(m, couplings[k], nd, k, k, local.data());
      }
      if (!with_edges) continue;
      for (int l = 0; l < 3; ++l) {
        const int e = mesh.element_edge(k, l);
        const Edge& edge = mesh.edges()[e];
        const double* blocks = edge_buffer.data() + static_cast<std::size_t>(e) * 4 * nblock;
        const int a = edge.plus.element == k ? 0 : 1;
        add_block(m, couplings[k], nd, k, k, blocks + (3 * a) * nblock);
        if (edge.minus) {
          const int other = a == 0 ? edge.minus->element : edge.plus.element;
          add_block(m, couplings[k], nd, k, other, blocks + (2 * a + (1 - a)) * nblock);
        }
      }
    }
  }
  return m;
}

}  // namespace

SparseSymMatrix dg_block_pattern(const DGSpace& space) {
  const int nd = space.dofs_per_element();
  const auto couplings = element_couplings(space.mesh());
  std::vector<int> row_ptr(static_cast<std::size_t>(space.total_dofs()) + 1, 0);
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int i = 0; i < nd; ++i) {
      row_ptr[k * nd + i + 1] = row_ptr[k * nd + i] + couplings[k].count * nd;
    }
  }
  std::vector<int> cols(static_cast<std::size_t>(row_ptr.back()));
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int i = 0; i < nd; ++i) {
      int pos = row_ptr[k * nd + i];
      for (int p = 0; p < couplings[k].count; ++p) {
        for (int j = 0; j < nd; ++j) cols[pos++] = couplings[k].elements[p] * nd + j;
      }
    }
  }
  std::vector<double> values(cols.size(), 0.0);
  return SparseSymMatrix(space.total_dofs(), std::move(row_ptr), std::move(cols),
                         std::move(values), nd);
}

SparseSymMatrix assemble_bilinear(const DGSpace& space, const AssemblyConfig& cfg,
                                  FormTerms terms) {
  cfg.validate();
  const int r = space.degree();
  EdgeWeights ew;
  ew.consistency = terms.consistency ? 1.0 : 0.0;
  ew.penalty = terms.penalty ? cfg.penalty : 0.0;
  return assemble_operator(space, terms.volume, ew, cfg.volume_quad(r), cfg.edge_quad(r));
}

SparseSymMatrix assemble_dg_norm_matrix(const DGSpace& space, const AssemblyConfig& cfg) {
  cfg.validate();
  const int r = space.degree();
  EdgeWeights ew;
  ew.penalty = cfg.penalty;
  ew.grad_average = 1.0 / cfg.penalty;
  return assemble_operator(space, true, ew, cfg.volume_quad(r), cfg.edge_quad(r));
}

SparseSymMatrix assemble_mass(const DGSpace& space, int quad_degree,
                              const std::function<double(Vec2)>& weight) {
  const int nd = space.dofs_per_element();
  SparseSymMatrix m = dg_block_pattern(space);
  const auto couplings = element_couplings(space.mesh());
  const VolumeTables vt = space.volume_tables(quad_degree);
#pragma omp parallel
  {
    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
#pragma omp for schedule(static)
    for (int k = 0; k < space.num_elements(); ++k) {
      element_mass(
          space, k, vt, [&](int, Vec2 x) { return weight ? weight(x) : 1.0; }, local.data());
      add_block(m, couplings[k], nd, k, k, local.data());
    }
  }
  return m;
}

std::vector<double> assemble_load(const DGSpace& space, const std::function<double(Vec2)>& g,
                                  int quad_degree) {
  const int nd = space.dofs_per_element();
  const VolumeTables vt = space.volume_tables(quad_degree);
  std::vector<double> b(space.total_dofs(), 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < space.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    double* bk = b.data() + space.dof_offset(k);
    for (int q = 0; q < vt.rule.size(); ++q) {
      const double wq = vt.rule.weights[q] * map.det * g(map.apply(vt.rule.points[q]));
      for (int i = 0; i < nd; ++i) bk[i] += wq * vt.table.value(q, i);
    }
  }
  return b;
}

std::vector<double> assemble_nonlinear_load(const DGSpace& space, const DGVector& u,
                                            const Problem& problem, const AssemblyConfig& cfg) {
  check_compatible(space, u);
  const int nd = space.dofs_per_element();
  const VolumeTables vt = space.volume_tables(cfg.volume_quad(space.degree()));
  std::vector<double> b(space.total_dofs(), 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < space.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    const auto coeffs = u.block(space, k);
    double* bk = b.data() + space.dof_offset(k);
    for (int q = 0; q < vt.rule.size(); ++q) {
      const Vec2 x = map.apply(vt.rule.points[q]);
      const double wq = vt.rule.weights[q] * map.det * problem.f(x, field_value(vt.table, q, coeffs));
      for (int i = 0; i < nd; ++i) bk[i] += wq * vt.table.value(q, i);
    }
  }
  return b;
}

std::vector<double> assemble_residual(const DGSpace& space, const SparseSymMatrix& bilinear,
                                      const DGVector& u, const Problem& problem,
                                      const AssemblyConfig& cfg) {
  check_compatible(space, u);
  std::vector<double> res = bilinear * u.values();
  const auto load = assemble_nonlinear_load(space, u, problem, cfg);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= load[i];
  return res;
}

std::vector<double> assemble_residual(const DGSpace& space, const DGVector& u,
                                      const Problem& problem, const AssemblyConfig& cfg) {
  return assemble_residual(space, assemble_bilinear(space, cfg), u, problem, cfg);
}

SparseSymMatrix assemble_jacobian(const DGSpace& space, const SparseSymMatrix& bilinear,
                                  const DGVector& u, const Problem& problem,
                                  const AssemblyConfig& cfg) {
  check_compatible(space, u);
  const int nd = space.dofs_per_element();
  SparseSymMatrix jac = bilinear;
  const auto couplings = element_couplings(space.mesh());
  const VolumeTables vt = space.volume_tables(cfg.volume_quad(space.degree()));
#pragma omp parallel
  {
    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
#pragma omp for schedule(static)
    for (int k = 0; k < space.num_elements(); ++k) {
      const auto coeffs = u.block(space, k);
      element_mass(
          space, k, vt,
          [&](int q, Vec2) { return -problem.f_u(field_value(vt.table, q, coeffs)); },
          local.data());
      add_block(jac, couplings[k], nd, k, k, local.data());
    }
  }
  return jac;
}

SparseSymMatrix assemble_jacobian(const DGSpace& space, const DGVector& u, const Problem& problem,
                                  const AssemblyConfig& cfg) {
  return assemble_jacobian(space, assemble_bilinear(space, cfg), u, problem, cfg);
}

std::vector<double> apply_form_to_exact(const DGSpace& space, const ExactSolution& w,
                                        const AssemblyConfig& cfg) {
  cfg.validate();
  const TriMesh& mesh = space.mesh();
  const int nd = space.dofs_per_element();
  const int r = space.degree();
  const VolumeTables vt = space.volume_tables(cfg.volume_quad(r));
  const TraceTables traces = space.trace_tables(cfg.edge_quad(r));
  std::vector<double> b(space.total_dofs(), 0.0);

#pragma omp parallel for schedule(static)
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    double* bk = b.data() + space.dof_offset(k);
    for (int q = 0; q < vt.rule.size(); ++q) {
      const double wq = vt.rule.weights[q] * map.det;
      const Vec2 gw = w.gradient(map.apply(vt.rule.points[q]));
      for (int i = 0; i < nd; ++i) bk[i] += wq * dot(gw, map.push_gradient(vt.table.gradient(q, i)));
    }
    for (int l = 0; l < 3; ++l) {
      const int e = mesh.element_edge(k, l);
      const Edge& edge = mesh.edges()[e];
      const EdgeSide side = edge.plus.element == k ? edge.plus : *edge.minus;
      const Vec2 nk = edge.plus.element == k ? edge.normal : -edge.normal;
      const double avg = edge.minus ? 0.5 : 1.0;
      const BasisTable& table = traces.get(side.local_edge, space.side_reversed(side));
      for (int q = 0; q < traces.rule.size(); ++q) {
        const double wq = traces.rule.weights[q] * edge.length;
        const Vec2 x = space.edge_point(e, traces.rule.points[q]);
        const Vec2 gw = w.gradient(x);
        // -{grad w}.[phi_i]; grad w is continuous so {grad w} = grad w on every edge.
        for (int i = 0; i < nd; ++i) bk[i] -= wq * dot(gw, nk) * table.value(q, i);
        if (edge.minus) continue;
        // Boundary: [w] = w n, so -{grad phi_i}.[w] + (lambda/h_e) [w].[phi_i].
        const double wx = w.value(x);
        for (int i = 0; i < nd; ++i) {
          const double dn = dot(map.push_gradient(table.gradient(q, i)), nk);
          bk[i] += wq * (-avg * dn * wx + cfg.penalty / edge.length * wx * table.value(q, i));
        }
      }
    }
  }
  return b;
}

}  // namespace dgsl
