#include "dgsl/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "dgsl/errors.hpp"

namespace dgsl {

namespace {

// Three-term recurrence of the orthonormal Jacobi polynomials:
//   x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}.
double recurrence_a(int k, double alpha, double beta) {
  const double s = 2.0 * k + alpha + beta;
  if (k == 0) return (beta - alpha) / (alpha + beta + 2.0);
  return (beta * beta - alpha * alpha) / (s * (s + 2.0));
}

double recurrence_b(int k, double alpha, double beta) {
  // k >= 1
  const double s = 2.0 * k + alpha + beta;
  const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta);
  const double den = s * s * (s + 1.0) * (s - 1.0);
  return std::sqrt(num / den);
}

double weight_mass(double alpha, double beta) {
  return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                  std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

}  // namespace

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = recurrence_a(k, alpha, beta);
    if (k + 1 < n) jacobi(k, k + 1) = jacobi(k + 1, k) = recurrence_b(k + 1, alpha, beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  nodes.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + n);

  const double mu0 = weight_mass(alpha, beta);
  const auto evaluate = [&](double x, double& pn, double& dpn, double& sum_sq) {
    // Orthonormal p_0..p_n and derivative of p_n by recurrence.
    double p_prev = 0.0;
    double p = 1.0 / std::sqrt(mu0);
    double dp_prev = 0.0;
    double dp = 0.0;
    sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
      sum_sq += p * p;
      const double b_next = recurrence_b(k + 1, alpha, beta);
      const double b_k = k > 0 ? recurrence_b(k, alpha, beta) : 0.0;
      const double a_k = recurrence_a(k, alpha, beta);
      const double p_next = ((x - a_k) * p - b_k * p_prev) / b_next;
      const double dp_next = (p + (x - a_k) * dp - b_k * dp_prev) / b_next;
      p_prev = p;
      p = p_next;
      dp_prev = dp;
      dp = dp_next;
    }
    pn = p;
    dpn = dp;
  };

  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = nodes[i];
    double pn = 0.0;
    double dpn = 0.0;
    double sum_sq = 0.0;
    for (int it = 0; it < 3; ++it) {
      evaluate(x, pn, dpn, sum_sq);
      if (dpn == 0.0) break;
      x -= pn / dpn;
    }
    evaluate(x, pn, dpn, sum_sq);
    nodes[i] = x;
    weights[i] = 1.0 / sum_sq;
  }
}

TriangleRule triangle_rule(int degree) {
  if (degree < 1 || degree > kMaxTriangleDegree) {
    throw UnsupportedDegree("triangle quadrature degree " + std::to_string(degree) +
                            " outside [1, " + std::to_string(kMaxTriangleDegree) + "]");
  }
  const int m = (degree + 2) / 2;  // m points per direction are exact to degree 2m-1

  std::vector<double> xs, wxs, es, wes;
  gauss_jacobi(m, 0.0, 0.0, xs, wxs);
  gauss_jacobi(m, 1.0, 0.0, es, wes);

  // (x, y) = (s (1 - t), t) maps the unit square onto the triangle with
  // Jacobian (1 - t); the Jacobi(1, 0) rule in t absorbs that factor.
  TriangleRule rule;
  rule.exactness_degree = 2 * m - 1;
  for (int j = 0; j < m; ++j) {
    const double t = 0.5 * (es[j] + 1.0);
    const double wt = 0.25 * wes[j];
    for (int i = 0; i < m; ++i) {
      const double s = 0.5 * (xs[i] + 1.0);
      const double ws = 0.5 * wxs[i];
      rule.points.push_back({s * (1.0 - t), t});
      rule.weights.push_back(ws * wt);
    }
  }
  return rule;
}

EdgeRule edge_rule(int degree) {
  if (degree < 1 || degree > kMaxEdgeDegree) {
    throw UnsupportedDegree("edge quadrature degree " + std::to_string(degree) + " outside [1, " +
                            std::to_string(kMaxEdgeDegree) + "]");
  }
  const int m = (degree + 2) / 2;
  std::vector<double> xs, ws;
  gauss_jacobi(m, 0.0, 0.0, xs, ws);
  EdgeRule rule;
  rule.exactness_degree = 2 * m - 1;
  for (int i = 0; i < m; ++i) {
    rule.points.push_back(0.5 * (xs[i] + 1.0));
    rule.weights.push_back(0.5 * ws[i]);
  }
  return rule;
}

}  // namespace dgsl
