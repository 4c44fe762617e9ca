#include "dgsl/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "dgsl/parallel.hpp"

namespace dgsl {

namespace {

int norm_degree(const DGSpace& space, std::optional<int> quad_degree) {
  return quad_degree.value_or(analysis_degree(space.degree()));
}

FieldSample sample(const BasisTable& table, const AffineMap& map, int q,
                   std::span<const double> coeffs) {
  FieldSample s;
  Vec2 g;
  for (int i = 0; i < table.dim; ++i) {
    s.value += coeffs[i] * table.value(q, i);
    g += coeffs[i] * table.gradient(q, i);
  }
  s.gradient = map.push_gradient(g);
  return s;
}

// Shared by the error and the discrete norm; `exact` may be null (u = 0).
DGNormParts dg_parts(const DGSpace& space, const DGVector& v, const ExactSolution* exact,
                     double penalty, int degree) {
  check_compatible(space, v);
  const TriMesh& mesh = space.mesh();
  const VolumeTables vt = space.volume_tables(degree);
  const TraceTables tt = space.trace_tables(std::min(degree, kMaxEdgeDegree));

  std::vector<double> grad_terms(mesh.num_elements());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    const auto coeffs = v.block(space, k);
    double sum = 0.0;
    for (int q = 0; q < vt.rule.size(); ++q) {
      Vec2 g = -sample(vt.table, map, q, coeffs).gradient;
      if (exact) g += exact->gradient(map.apply(vt.rule.points[q]));
      sum += vt.rule.weights[q] * map.det * dot(g, g);
    }
    grad_terms[k] = sum;
  }

  std::vector<double> avg_terms(mesh.num_edges());
  std::vector<double> jump_terms(mesh.num_edges());
#pragma omp parallel for schedule(static)
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const BasisTable& tp = tt.get(edge.plus.local_edge, space.side_reversed(edge.plus));
    const BasisTable* tm =
        edge.minus ? &tt.get(edge.minus->local_edge, space.side_reversed(*edge.minus)) : nullptr;
    double avg = 0.0;
    double jump = 0.0;
    for (int q = 0; q < tt.rule.size(); ++q) {
      const double wq = tt.rule.weights[q] * edge.length;
      const FieldSample p =
          sample(tp, space.map(edge.plus.element), q, v.block(space, edge.plus.element));
      Vec2 grad_avg;
      double jump_val = 0.0;
      if (tm) {
        const FieldSample m =
            sample(*tm, space.map(edge.minus->element), q, v.block(space, edge.minus->element));
        grad_avg = -0.5 * (p.gradient + m.gradient);
        jump_val = -(p.value - m.value);
      } else {
        grad_avg = -p.gradient;
        jump_val = -p.value;
      }
      if (exact) {
        const Vec2 x = space.edge_point(e, tt.rule.points[q]);
        grad_avg += exact->gradient(x);
        if (!tm) jump_val += exact->value(x);
      }
      avg += wq * dot(grad_avg, grad_avg);
      jump += wq * jump_val * jump_val;
    }
    avg_terms[e] = edge.length / penalty * avg;
    jump_terms[e] = penalty / edge.length * jump;
  }
  return {pairwise_sum(grad_terms), pairwise_sum(avg_terms), pairwise_sum(jump_terms)};
}

}  // namespace

double DGNormParts::total() const { return std::sqrt(gradient + average + jump); }

double l2_error(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                std::optional<int> quad_degree) {
  check_compatible(space, v);
  const VolumeTables vt = space.volume_tables(norm_degree(space, quad_degree));
  std::vector<double> terms(space.num_elements());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < space.num_elements(); ++k) {
    const AffineMap& map = space.map(k);
    const auto coeffs = v.block(space, k);
    double sum = 0.0;
    for (int q = 0; q < vt.rule.size(); ++q) {
      const double d = exact.value(map.apply(vt.rule.points[q])) - sample(vt.table, map, q, coeffs).value;
      sum += vt.rule.weights[q] * map.det * d * d;
    }
    terms[k] = sum;
  }
  return std::sqrt(pairwise_sum(terms));
}

double l2_norm(const DGSpace& space, const DGVector& v, std::optional<int> quad_degree) {
  ExactSolution zero;
  zero.value = [](Vec2) { return 0.0; };
  return l2_error(space, v, zero, quad_degree);
}

DGNormParts dg_error_parts(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                           double penalty, std::optional<int> quad_degree) {
  return dg_parts(space, v, &exact, penalty, norm_degree(space, quad_degree));
}

double dg_error(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                double penalty, std::optional<int> quad_degree) {
  return dg_error_parts(space, v, exact, penalty, quad_degree).total();
}

DGNormParts dg_norm_parts(const DGSpace& space, const DGVector& v, double penalty,
                          std::optional<int> quad_degree) {
  return dg_parts(space, v, nullptr, penalty, norm_degree(space, quad_degree));
}

double dg_norm_discrete(const DGSpace& space, const DGVector& v, double penalty,
                        std::optional<int> quad_degree) {
  return dg_norm_parts(space, v, penalty, quad_degree).total();
}

DGVector elliptic_project(const DGSpace& space, const ExactSolution& w, const AssemblyConfig& cfg,
                          const LinearSolveOptions& options) {
  const SparseSymMatrix a = assemble_bilinear(space, cfg);
  const std::vector<double> b = apply_form_to_exact(space, w, cfg);
  return DGVector(solve_spd(a, b, options).x);
}

std::vector<std::optional<double>> observed_orders(std::span<const LevelError> levels) {
  if (levels.size() < 2) throw InsufficientLevels("observed orders need at least two levels");
  std::vector<std::optional<double>> out{std::nullopt};
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i].h < levels[i - 1].h)) {
      throw InvalidArgument("mesh sizes must strictly decrease between levels");
    }
    out.push_back(std::log(levels[i - 1].error / levels[i].error) /
                  std::log(levels[i - 1].h / levels[i].h));
  }
  return out;
}

namespace {

// Edge mass, element mass and element stiffness for one (element, local edge).
struct LocalTraceMatrices {
  Eigen::MatrixXd edge_mass;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  double edge_length = 0.0;
};

LocalTraceMatrices local_trace_matrices(const DGSpace& space, const VolumeTables& vt,
                                        const TraceTables& tt, int k, int local_edge) {
  const int nd = space.dofs_per_element();
  const AffineMap& map = space.map(k);
  const Edge& edge = space.mesh().edges()[space.mesh().element_edge(k, local_edge)];
  LocalTraceMatrices out{Eigen::MatrixXd::Zero(nd, nd), Eigen::MatrixXd::Zero(nd, nd),
                         Eigen::MatrixXd::Zero(nd, nd), edge.length};
  for (int q = 0; q < vt.rule.size(); ++q) {
    const double wq = vt.rule.weights[q] * map.det;
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) {
        out.mass(i, j) += wq * vt.table.value(q, i) * vt.table.value(q, j);
        out.stiffness(i, j) += wq * dot(map.push_gradient(vt.table.gradient(q, i)),
                                        map.push_gradient(vt.table.gradient(q, j)));
      }
    }
  }
  const BasisTable& table = tt.get(local_edge, false);
  for (int q = 0; q < tt.rule.size(); ++q) {
    const double wq = tt.rule.weights[q] * edge.length;
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) out.edge_mass(i, j) += wq * table.value(q, i) * table.value(q, j);
    }
  }
  return out;
}

}  // namespace

double trace_ratio(const DGSpace& space, const DGVector& v, int element, int local_edge) {
  check_compatible(space, v);
  const int r = space.degree();
  const VolumeTables vt = space.volume_tables(2 * r);
  const TraceTables tt = space.trace_tables(2 * r);
  const auto m = local_trace_matrices(space, vt, tt, element, local_edge);
  const auto block = v.block(space, element);
  const Eigen::Map<const Eigen::VectorXd> c(block.data(), static_cast<Eigen::Index>(block.size()));
  const double num = c.dot(m.edge_mass * c);
  const double den = c.dot(m.mass * c) / m.edge_length + m.edge_length * c.dot(m.stiffness * c);
  return num / den;
}

double estimate_trace_constant(const DGSpace& space) {
  const int r = space.degree();
  const VolumeTables vt = space.volume_tables(2 * r);
  const TraceTables tt = space.trace_tables(2 * r);
  std::vector<double> per_element(space.num_elements(), 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < space.num_elements(); ++k) {
    for (int l = 0; l < 3; ++l) {
      const auto m = local_trace_matrices(space, vt, tt, k, l);
      const Eigen::MatrixXd gram = m.mass / m.edge_length + m.edge_length * m.stiffness;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.edge_mass, gram,
                                                                     Eigen::EigenvaluesOnly);
      per_element[k] = std::max(per_element[k], eig.eigenvalues().maxCoeff());
    }
  }
  return *std::max_element(per_element.begin(), per_element.end());
}

double IdentitySides::relative_residual() const {
  const double scale = std::max({std::abs(element_sum), std::abs(edge_sum), 1e-300});
  return std::abs(element_sum - edge_sum) / scale;
}

IdentitySides boundary_flux_identity(const DGSpace& space, const DGVector& v, const DGVector& wx,
                                     const DGVector& wy) {
  check_compatible(space, v);
  check_compatible(space, wx);
  check_compatible(space, wy);
  const TriMesh& mesh = space.mesh();
  const TraceTables tt = space.trace_tables(3 * space.degree());

  // Left side: loop over element boundaries with the element's own outward normal.
  std::vector<double> element_terms(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto cv = v.block(space, k);
    const auto cx = wx.block(space, k);
    const auto cy = wy.block(space, k);
    double sum = 0.0;
    for (int l = 0; l < 3; ++l) {
      const Edge& edge = mesh.edges()[mesh.element_edge(k, l)];
      const Vec2 nk = edge.plus.element == k ? edge.normal : -edge.normal;
      const BasisTable& table = tt.get(l, false);
      for (int q = 0; q < tt.rule.size(); ++q) {
        double vq = 0.0;
        Vec2 wq;
        for (int i = 0; i < table.dim; ++i) {
          vq += cv[i] * table.value(q, i);
          wq += table.value(q, i) * Vec2{cx[i], cy[i]};
        }
        sum += tt.rule.weights[q] * edge.length * vq * dot(wq, nk);
      }
    }
    element_terms[k] = sum;
  }

  // Right side: jumps and averages on each edge.
  std::vector<double> edge_terms(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const auto sv = edge_jump_average(space, v, e, tt.rule.points);
    const auto sx = edge_jump_average(space, wx, e, tt.rule.points);
    const auto sy = edge_jump_average(space, wy, e, tt.rule.points);
    double sum = 0.0;
    for (int q = 0; q < tt.rule.size(); ++q) {
      const Vec2 w_avg{sx[q].average, sy[q].average};
      double term = dot(w_avg, sv[q].jump);
      if (edge.minus) term += sv[q].average * (sx[q].jump.x + sy[q].jump.y);
      sum += tt.rule.weights[q] * edge.length * term;
    }
    edge_terms[e] = sum;
  }
  return {pairwise_sum(element_terms), pairwise_sum(edge_terms)};
}

double l2_over_dg_bound(const DGSpace& space, const AssemblyConfig& cfg, int iterations) {
  const SparseSymMatrix dg = assemble_dg_norm_matrix(space, cfg);
  const SparseSymMatrix mass = assemble_mass(space, 2 * space.degree());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> y(space.total_dofs());
  for (double& v : y) v = unit(rng);

  LinearSolveOptions opts;
  opts.tol = 1e-10;
  double mu = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const std::vector<double> my = mass * y;
    std::vector<double> next = solve_spd(dg, my, opts).x;
    const double scale = std::sqrt(deterministic_dot(next, next));
    for (double& v : next) v /= scale;
    y = std::move(next);
    mu = mass.bilinear(y, y) / dg.bilinear(y, y);
  }
  return std::sqrt(mu);
}

}  // namespace dgsl
