#include "dgsl/basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "dgsl/errors.hpp"

namespace dgsl {

namespace {

const std::array<Vec2, 3> kRefVertices = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

std::vector<Vec2> lattice_nodes(int r) {
  std::vector<Vec2> nodes(kRefVertices.begin(), kRefVertices.end());
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = kRefVertices[(k + 1) % 3];
    const Vec2 b = kRefVertices[(k + 2) % 3];
    for (int s = 1; s < r; ++s) nodes.push_back(a + (static_cast<double>(s) / r) * (b - a));
  }
  for (int j = 1; j < r; ++j) {
    for (int i = 1; i + j < r; ++i) {
      nodes.push_back({static_cast<double>(i) / r, static_cast<double>(j) / r});
    }
  }
  return nodes;
}

}  // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree), dim_((degree + 1) * (degree + 2) / 2) {
  if (degree < 1 || degree > kMaxBasisDegree) {
    throw UnsupportedDegree("Lagrange degree " + std::to_string(degree) + " outside [1, " +
                            std::to_string(kMaxBasisDegree) + "]");
  }
  nodes_ = lattice_nodes(degree);
  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
  }

  // Rows: nodes, columns: monomials. phi = V^{-1} applied to the monomial vector.
  Eigen::MatrixXd vandermonde(dim_, dim_);
  for (int n = 0; n < dim_; ++n) {
    for (int m = 0; m < dim_; ++m) {
      vandermonde(n, m) = std::pow(nodes_[n].x, exponents_[m][0]) *
                          std::pow(nodes_[n].y, exponents_[m][1]);
    }
  }
  const Eigen::MatrixXd inv = vandermonde.fullPivLu().inverse();
  coeffs_.resize(static_cast<std::size_t>(dim_) * dim_);
  for (int m = 0; m < dim_; ++m) {
    for (int i = 0; i < dim_; ++i) coeffs_[m * dim_ + i] = inv(m, i);
  }
}

double ReferenceBasis::value(int i, Vec2 p) const {
  double v = 0.0;
  for (int m = 0; m < dim_; ++m) {
    v += coeffs_[m * dim_ + i] * std::pow(p.x, exponents_[m][0]) * std::pow(p.y, exponents_[m][1]);
  }
  return v;
}

Vec2 ReferenceBasis::gradient(int i, Vec2 p) const {
  Vec2 g;
  for (int m = 0; m < dim_; ++m) {
    const auto [a, b] = exponents_[m];
    const double c = coeffs_[m * dim_ + i];
    if (a > 0) g.x += c * a * std::pow(p.x, a - 1) * std::pow(p.y, b);
    if (b > 0) g.y += c * b * std::pow(p.x, a) * std::pow(p.y, b - 1);
  }
  return g;
}

BasisTable ReferenceBasis::tabulate(std::span<const Vec2> points) const {
  BasisTable table;
  table.num_points = static_cast<int>(points.size());
  table.dim = dim_;
  table.values.resize(points.size() * dim_);
  table.gradients.resize(points.size() * dim_);
  for (std::size_t q = 0; q < points.size(); ++q) {
    for (int i = 0; i < dim_; ++i) {
      table.values[q * dim_ + i] = value(i, points[q]);
      table.gradients[q * dim_ + i] = gradient(i, points[q]);
    }
  }
  return table;
}

ReferenceBasis make_basis(int r) { return ReferenceBasis(r); }

AffineMap AffineMap::from_vertices(Vec2 a, Vec2 b, Vec2 c) {
  AffineMap map;
  map.origin = a;
  map.jacobian = {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
  map.det = map.jacobian[0] * map.jacobian[3] - map.jacobian[1] * map.jacobian[2];
  if (map.det != 0.0) {
    const double inv = 1.0 / map.det;
    // J^{-1} = [[d, -b], [-c, a]] / det, transposed.
    map.inv_transpose = {map.jacobian[3] * inv, -map.jacobian[2] * inv, -map.jacobian[1] * inv,
                         map.jacobian[0] * inv};
  }
  return map;
}

std::vector<Vec2> physical_gradients(const ReferenceBasis& basis, const AffineMap& map,
                                     std::span<const Vec2> points) {
  if (!(map.det > 0.0)) throw DegenerateElement("affine map has non-positive determinant");
  std::vector<Vec2> out;
  out.reserve(points.size() * basis.dim());
  for (const Vec2 p : points) {
    for (int i = 0; i < basis.dim(); ++i) out.push_back(map.push_gradient(basis.gradient(i, p)));
  }
  return out;
}

Vec2 reference_edge_point(int local_edge, double t, bool reversed) {
  const Vec2 a = kRefVertices[(local_edge + 1) % 3];
  const Vec2 b = kRefVertices[(local_edge + 2) % 3];
  const double s = reversed ? 1.0 - t : t;
  return a + s * (b - a);
}

BasisTable trace_table(const ReferenceBasis& basis, int local_edge,
                       std::span<const double> edge_points, bool reversed) {
  std::vector<Vec2> pts;
  pts.reserve(edge_points.size());
  for (double t : edge_points) pts.push_back(reference_edge_point(local_edge, t, reversed));
  return basis.tabulate(pts);
}

}  // namespace dgsl
