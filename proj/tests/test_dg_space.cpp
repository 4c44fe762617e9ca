#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgsl/analysis.hpp"
#include "dgsl/errors.hpp"
#include "test_util.hpp"

using namespace dgsl;
using dgsl::test::random_field;
using dgsl::test::structured;

namespace {

const std::vector<Vec2> kRefPoints = {{0.1, 0.2}, {0.6, 0.3}, {0.25, 0.25}, {0.05, 0.9}};

double sine(Vec2 p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); }

}  // namespace

TEST(DGSpace, Layout) {
  const DGSpace space(structured(3), 2);
  EXPECT_EQ(space.dofs_per_element(), 6);
  EXPECT_EQ(space.total_dofs(), 18 * 6);
  for (int k = 0; k < space.num_elements(); ++k) EXPECT_EQ(space.dof_offset(k), 6 * k);
  EXPECT_THROW(DGSpace(structured(2), 4), UnsupportedDegree);
}

TEST(DGSpace, EdgePointsAgreeFromBothSides) {
  const auto mesh = structured(4);
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(mesh, r);
    for (int e = 0; e < mesh->num_edges(); ++e) {
      const Edge& edge = mesh->edges()[e];
      if (edge.is_boundary()) continue;
      for (double t : {0.0, 0.21, 0.5, 1.0}) {
        const Vec2 x = space.edge_point(e, t);
        const Vec2 xp = space.map(edge.plus.element)
                            .apply(reference_edge_point(edge.plus.local_edge, t,
                                                        space.side_reversed(edge.plus)));
        const Vec2 xm = space.map(edge.minus->element)
                            .apply(reference_edge_point(edge.minus->local_edge, t,
                                                        space.side_reversed(*edge.minus)));
        EXPECT_NEAR(norm(xp - x), 0.0, 1e-13);
        EXPECT_NEAR(norm(xm - x), 0.0, 1e-13);
      }
    }
  }
}

TEST(Interpolate, ZeroAndLinear) {
  const DGSpace space(structured(4), 1);
  const DGVector zero = interpolate(space, [](Vec2) { return 0.0; });
  for (double c : zero.values()) EXPECT_EQ(c, 0.0);

  const DGVector lin = interpolate(space, [](Vec2 p) { return p.x + p.y; });
  for (int k = 0; k < space.num_elements(); ++k) {
    const auto s = evaluate(space, lin, k, kRefPoints);
    for (std::size_t q = 0; q < kRefPoints.size(); ++q) {
      const Vec2 x = space.map(k).apply(kRefPoints[q]);
      EXPECT_NEAR(s[q].value, x.x + x.y, 1e-12);
      EXPECT_NEAR(s[q].gradient.x, 1.0, 1e-12);
      EXPECT_NEAR(s[q].gradient.y, 1.0, 1e-12);
    }
  }
}

TEST(Interpolate, SecondOrderL2Rate) {
  ExactSolution exact;
  exact.value = sine;
  std::vector<LevelError> levels;
  for (int n : {8, 16, 32}) {
    const DGSpace space(structured(n), 1);
    levels.push_back({1.0 / n, l2_error(space, interpolate(space, sine), exact)});
  }
  const auto orders = observed_orders(levels);
  EXPECT_NEAR(*orders[1], 2.0, 0.1);
  EXPECT_NEAR(*orders[2], 2.0, 0.1);
}

TEST(Evaluate, ConstantsAndNodes) {
  std::mt19937_64 rng(4);
  const DGSpace space(structured(2), 3);
  const DGVector five = interpolate(space, [](Vec2) { return 5.0; });
  const DGVector zero(space);
  const DGVector v = random_field(space, rng);
  for (int k = 0; k < space.num_elements(); ++k) {
    for (const auto& s : evaluate(space, five, k, kRefPoints)) {
      EXPECT_NEAR(s.value, 5.0, 1e-12);
      EXPECT_NEAR(norm(s.gradient), 0.0, 1e-11);
    }
    for (const auto& s : evaluate(space, zero, k, kRefPoints)) EXPECT_EQ(s.value, 0.0);
    const auto at_nodes = evaluate(space, v, k, space.basis().nodes());
    const auto block = v.block(space, k);
    for (int i = 0; i < space.dofs_per_element(); ++i)
      EXPECT_NEAR(at_nodes[i].value, block[i], 1e-12);
  }
  EXPECT_THROW(evaluate(space, v, space.num_elements(), kRefPoints), IndexOutOfRange);
  EXPECT_THROW(evaluate(space, v, -1, kRefPoints), IndexOutOfRange);
  EXPECT_THROW(evaluate(space, DGVector(std::vector<double>(3)), 0, kRefPoints), InvalidArgument);
}

TEST(JumpAverage, ContinuousFieldHasNoJump) {
  const DGSpace space(structured(4), 2);
  const DGVector v = interpolate(space, sine);
  const std::vector<double> t = {0.0, 0.3, 0.5, 0.9, 1.0};
  for (int e = 0; e < space.mesh().num_edges(); ++e) {
    if (space.mesh().edges()[e].is_boundary()) continue;
    for (const auto& s : edge_jump_average(space, v, e, t)) EXPECT_LE(norm(s.jump), 1e-12);
  }
}

TEST(JumpAverage, IndicatorOfPlusSide) {
  const DGSpace space(structured(3), 2);
  const std::vector<double> t = {0.2, 0.7};
  for (int e = 0; e < space.mesh().num_edges(); ++e) {
    const Edge& edge = space.mesh().edges()[e];
    if (edge.is_boundary()) continue;
    DGVector v(space);
    for (int i = 0; i < space.dofs_per_element(); ++i)
      v[space.dof_offset(edge.plus.element) + i] = 1.0;
    for (const auto& s : edge_jump_average(space, v, e, t)) {
      EXPECT_NEAR(s.jump.x, edge.normal.x, 1e-13);
      EXPECT_NEAR(s.jump.y, edge.normal.y, 1e-13);
      EXPECT_NEAR(s.average, 0.5, 1e-13);
    }
  }
}

TEST(JumpAverage, MatchesDirectTraces) {
  std::mt19937_64 rng(8);
  const DGSpace space(structured(3), 3);
  const DGVector v = random_field(space, rng);
  const std::vector<double> t = {0.1, 0.45, 0.8};
  for (int e = 0; e < space.mesh().num_edges(); ++e) {
    const Edge& edge = space.mesh().edges()[e];
    const auto samples = edge_jump_average(space, v, e, t);
    for (std::size_t q = 0; q < t.size(); ++q) {
      const Vec2 x = space.edge_point(e, t[q]);
      // Locate the physical point in each neighbour through the inverse affine map.
      auto value_on = [&](int k) {
        const AffineMap& m = space.map(k);
        const Vec2 d = x - m.origin;
        const Vec2 xi{m.inv_transpose[0] * d.x + m.inv_transpose[2] * d.y,
                      m.inv_transpose[1] * d.x + m.inv_transpose[3] * d.y};
        const std::vector<Vec2> p = {xi};
        return evaluate(space, v, k, p)[0];
      };
      const auto plus = value_on(edge.plus.element);
      if (edge.is_boundary()) {
        EXPECT_NEAR(samples[q].jump.x, plus.value * edge.normal.x, 1e-12);
        EXPECT_NEAR(samples[q].average, plus.value, 1e-12);
        EXPECT_NEAR(samples[q].grad_average.x, plus.gradient.x, 1e-11);
        continue;
      }
      const auto minus = value_on(edge.minus->element);
      EXPECT_NEAR(dot(samples[q].jump, edge.normal), plus.value - minus.value, 1e-13);
      EXPECT_NEAR(samples[q].average, 0.5 * (plus.value + minus.value), 1e-13);
      EXPECT_NEAR(samples[q].grad_average.y, 0.5 * (plus.gradient.y + minus.gradient.y), 1e-11);
      EXPECT_NEAR(samples[q].grad_jump, dot(plus.gradient - minus.gradient, edge.normal), 1e-11);
    }
  }
}

TEST(BoundaryFluxIdentity, RandomFields) {
  std::mt19937_64 rng(21);
  for (int n : {2, 4}) {
    for (int r = 1; r <= 3; ++r) {
      const DGSpace space(structured(n), r);
      for (int s = 0; s < 5; ++s) {
        const auto sides = boundary_flux_identity(space, random_field(space, rng),
                                                  random_field(space, rng),
                                                  random_field(space, rng));
        EXPECT_LE(sides.relative_residual(), 1e-11);
      }
    }
  }
}
