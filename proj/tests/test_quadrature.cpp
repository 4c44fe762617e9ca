#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dgsl/errors.hpp"
#include "dgsl/quadrature.hpp"

using namespace dgsl;

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double monomial_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double integrate(const TriangleRule& rule, int a, int b) {
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
  return s;
}

}  // namespace

TEST(TriangleRule, CentroidRule) {
  const TriangleRule r = triangle_rule(1);
  ASSERT_EQ(r.size(), 1);
  EXPECT_NEAR(r.weights[0], 0.5, 1e-15);
  EXPECT_NEAR(r.points[0].x, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r.points[0].y, 1.0 / 3, 1e-15);
}

TEST(TriangleRule, KnownMonomials) {
  EXPECT_NEAR(integrate(triangle_rule(2), 2, 0), 1.0 / 12, 1e-14);
  const double exact = monomial_integral(4, 6);
  EXPECT_NEAR(integrate(triangle_rule(10), 4, 6), exact, 1e-12 * exact);
}

TEST(TriangleRule, ExactnessSweep) {
  for (int d = 1; d <= kMaxTriangleDegree; ++d) {
    const TriangleRule rule = triangle_rule(d);
    EXPECT_GE(rule.exactness_degree, d);
    double wsum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      EXPECT_GT(rule.weights[q], 0.0);
      const Vec2 p = rule.points[q];
      EXPECT_TRUE(p.x > 0.0 && p.y > 0.0 && p.x + p.y < 1.0);
      wsum += rule.weights[q];
    }
    EXPECT_NEAR(wsum, 0.5, 1e-14);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const double exact = monomial_integral(a, b);
        EXPECT_NEAR(integrate(rule, a, b), exact, 1e-12 * exact) << d << " " << a << " " << b;
      }
  }
}

TEST(TriangleRule, NotExactBeyondDegree) {
  // The rule for degree 2 (2x2 points, exactness 3) cannot integrate x^4.
  const TriangleRule rule = triangle_rule(2);
  const int d = rule.exactness_degree + 1;
  EXPECT_GT(std::abs(integrate(rule, d, 0) - monomial_integral(d, 0)), 1e-6);
}

TEST(TriangleRule, UnsupportedDegree) {
  EXPECT_THROW(triangle_rule(0), UnsupportedDegree);
  EXPECT_THROW(triangle_rule(kMaxTriangleDegree + 1), UnsupportedDegree);
}

TEST(EdgeRule, Midpoint) {
  const EdgeRule r = edge_rule(1);
  ASSERT_EQ(r.size(), 1);
  EXPECT_DOUBLE_EQ(r.points[0], 0.5);
  EXPECT_DOUBLE_EQ(r.weights[0], 1.0);
}

TEST(EdgeRule, GaussPointCounts) {
  const EdgeRule r5 = edge_rule(5);
  EXPECT_EQ(r5.size(), 3);
  double s = 0.0;
  for (int q = 0; q < r5.size(); ++q) s += r5.weights[q] * std::pow(r5.points[q], 5);
  EXPECT_NEAR(s, 1.0 / 6, 1e-15);

  const EdgeRule r9 = edge_rule(9);
  EXPECT_EQ(r9.size(), 5);
  s = 0.0;
  for (int q = 0; q < r9.size(); ++q) s += r9.weights[q] * std::pow(r9.points[q], 9);
  EXPECT_NEAR(s, 0.1, 1e-14);
}

TEST(EdgeRule, ExactnessSweep) {
  for (int d = 1; d <= kMaxEdgeDegree; ++d) {
    const EdgeRule rule = edge_rule(d);
    EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 1.0, 1e-14);
    for (int k = 0; k <= d; ++k) {
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-13) << d << " " << k;
    }
  }
  EXPECT_THROW(edge_rule(0), UnsupportedDegree);
  EXPECT_THROW(edge_rule(kMaxEdgeDegree + 1), UnsupportedDegree);
}

TEST(GaussJacobi, MatchesClosedFormTwoPoint) {
  // Two-point Gauss-Legendre nodes are +-1/sqrt(3).
  std::vector<double> x, w;
  gauss_jacobi(2, 0.0, 0.0, x, w);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_NEAR(std::abs(x[0]), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(w[0] + w[1], 2.0, 1e-15);

  // Weight (1 - x): int_{-1}^{1} (1 - x) x^2 dx = 2/3.
  gauss_jacobi(3, 1.0, 0.0, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * x[i];
  EXPECT_NEAR(s, 2.0 / 3, 1e-15);
}
