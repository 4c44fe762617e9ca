#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgsl/assembly.hpp"
#include "dgsl/errors.hpp"
#include "dgsl/quadrature.hpp"
#include "test_util.hpp"

using namespace dgsl;
using dgsl::test::random_field;
using dgsl::test::structured;

namespace {

Problem zero_problem() {
  Problem p;
  p.name = "zero";
  p.nonlinearity = [](double) { return 0.0; };
  p.nonlinearity_derivative = [](double) { return 0.0; };
  p.source = [](Vec2) { return 0.0; };
  return p;
}

double max_entry_difference(const SparseSymMatrix& a, const SparseSymMatrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      d = std::max(d, std::abs(a.values()[p] - b.at(i, a.cols()[p])));
  for (int i = 0; i < b.dim(); ++i)
    for (int p = b.row_ptr()[i]; p < b.row_ptr()[i + 1]; ++p)
      d = std::max(d, std::abs(b.values()[p] - a.at(i, b.cols()[p])));
  return d;
}

}  // namespace

TEST(Bilinear, SmallestMeshIsSymmetricPositive) {
  const DGSpace space(structured(1), 1);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  EXPECT_EQ(a.dim(), 6);
  EXPECT_LE(a.symmetry_defect(), 1e-12 * a.max_abs());
  std::mt19937_64 rng(1);
  for (int s = 0; s < 100; ++s) {
    const DGVector v = random_field(space, rng);
    EXPECT_GT(a.bilinear(v.values(), v.values()), 0.0);
  }
}

TEST(Bilinear, SparsityFollowsEdgeAdjacency) {
  const DGSpace space(structured(3), 2);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  const TriMesh& mesh = space.mesh();
  const int nd = space.dofs_per_element();
  for (int k = 0; k < mesh.num_elements(); ++k) {
    std::vector<bool> coupled(mesh.num_elements(), false);
    coupled[k] = true;
    for (int j = 0; j < 3; ++j) {
      const Edge& e = mesh.edges()[mesh.element_edge(k, j)];
      if (e.minus) coupled[e.plus.element == k ? e.minus->element : e.plus.element] = true;
    }
    for (int p = a.row_ptr()[k * nd]; p < a.row_ptr()[k * nd + 1]; ++p)
      EXPECT_TRUE(coupled[a.cols()[p] / nd]);
  }
}

TEST(Bilinear, MatchesSerialReference) {
  AssemblyConfig cfg;
  cfg.penalty = 37.0;
  for (const auto& mesh : {structured(3), std::make_shared<const TriMesh>(build_perturbed(5, 0.25, 11))}) {
    for (int r = 1; r <= 3; ++r) {
      const DGSpace space(mesh, r);
      const SparseSymMatrix par = assemble_bilinear(space, cfg);
      const SparseSymMatrix ser = reference::assemble_bilinear(space, cfg);
      EXPECT_LE(max_entry_difference(par, ser), 1e-11 * par.max_abs()) << "r=" << r;
      for (FormTerms t : {FormTerms{true, false, false}, FormTerms{false, true, false},
                          FormTerms{false, false, true}}) {
        const SparseSymMatrix p1 = assemble_bilinear(space, cfg, t);
        EXPECT_LE(max_entry_difference(p1, reference::assemble_bilinear(space, cfg, t)),
                  1e-11 * par.max_abs());
      }
    }
  }
}

TEST(Bilinear, VolumeTermByDirectQuadrature) {
  std::mt19937_64 rng(5);
  const DGSpace space(std::make_shared<const TriMesh>(build_perturbed(4, 0.2, 2)), 2);
  const SparseSymMatrix vol = assemble_bilinear(space, {}, FormTerms{true, false, false});
  const DGVector w = interpolate(space, [](Vec2 p) { return 2.0 * p.x - 0.5 * p.y + 1.0; });
  const DGVector v = random_field(space, rng);
  const TriangleRule rule = triangle_rule(4);
  double direct = 0.0;
  for (int k = 0; k < space.num_elements(); ++k) {
    const auto sv = evaluate(space, v, k, rule.points);
    for (int q = 0; q < rule.size(); ++q)
      direct += rule.weights[q] * space.map(k).det * dot(Vec2{2.0, -0.5}, sv[q].gradient);
  }
  EXPECT_NEAR(vol.bilinear(v.values(), w.values()), direct, 1e-12 * std::abs(direct) + 1e-13);
}

TEST(Bilinear, LinearInPenalty) {
  const DGSpace space(structured(3), 2);
  AssemblyConfig c1, c2;
  c1.penalty = 50.0;
  c2.penalty = 100.0;
  SparseSymMatrix diff = assemble_bilinear(space, c2);
  diff.add_scaled(assemble_bilinear(space, c1), -1.0);
  const SparseSymMatrix pen = assemble_bilinear(space, c1, FormTerms{false, false, true});
  EXPECT_LE(max_entry_difference(diff, pen), 1e-12 * pen.max_abs());
}

TEST(Bilinear, RejectsNonPositivePenalty) {
  const DGSpace space(structured(1), 1);
  AssemblyConfig cfg;
  cfg.penalty = 0.0;
  EXPECT_THROW(assemble_bilinear(space, cfg), InvalidArgument);
}

TEST(Bilinear, ConstantFieldHasOnlyBoundaryEnergy) {
  // For v = 1: a_h(1, 1) = sum over boundary edges of lambda/h_e |e| = 4 n lambda.
  const int n = 4;
  const DGSpace space(structured(n), 2);
  AssemblyConfig cfg;
  cfg.penalty = 10.0;
  const SparseSymMatrix a = assemble_bilinear(space, cfg);
  const DGVector one = interpolate(space, [](Vec2) { return 1.0; });
  EXPECT_NEAR(a.bilinear(one.values(), one.values()), 4.0 * n * cfg.penalty, 1e-10);
}

TEST(DGNormMatrix, GramOfTheNormTerms) {
  const DGSpace space(structured(2), 1);
  const SparseSymMatrix d = assemble_dg_norm_matrix(space, {});
  EXPECT_LE(d.symmetry_defect(), 1e-12 * d.max_abs());
  const DGVector one = interpolate(space, [](Vec2) { return 1.0; });
  EXPECT_NEAR(d.bilinear(one.values(), one.values()), 4.0 * 2 * 100.0, 1e-9);
}

TEST(Mass, WeightedMassIntegratesWeight) {
  const DGSpace space(structured(3), 2);
  const SparseSymMatrix m = assemble_mass(space, 6, [](Vec2 p) { return p.x; });
  const DGVector one = interpolate(space, [](Vec2) { return 1.0; });
  EXPECT_NEAR(m.bilinear(one.values(), one.values()), 0.5, 1e-13);
}

TEST(Residual, ZeroProblemZeroField) {
  const DGSpace space(structured(3), 2);
  const DGVector u(space);
  for (double r : assemble_residual(space, u, zero_problem(), {})) EXPECT_EQ(r, 0.0);
}

TEST(Residual, InterpolantResidualShrinksWithH) {
  const Problem p = sine_problem();
  double prev = 1e300;
  for (int n : {8, 16, 32}) {
    const DGSpace space(structured(n), 1);
    const DGVector u = interpolate(space, p.exact->value);
    const double r = test::norm2(assemble_residual(space, u, p, {}));
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Residual, PreassembledOverloadAgrees) {
  std::mt19937_64 rng(2);
  const DGSpace space(structured(3), 2);
  const Problem p = sine_problem();
  const DGVector u = random_field(space, rng);
  const auto r1 = assemble_residual(space, u, p, {});
  const auto r2 = assemble_residual(space, assemble_bilinear(space, {}), u, p, {});
  for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_NEAR(r1[i], r2[i], 1e-12);
}

TEST(NonlinearLoad, MatchesSerialReference) {
  std::mt19937_64 rng(3);
  const Problem p = sine_problem();
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(std::make_shared<const TriMesh>(build_perturbed(4, 0.2, 6)), r);
    const DGVector u = random_field(space, rng);
    const auto a = assemble_nonlinear_load(space, u, p, {});
    const auto b = reference::assemble_nonlinear_load(space, u, p, {});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(Jacobian, LinearReactionAddsMass) {
  Problem p = zero_problem();
  p.nonlinearity = [](double u) { return u; };
  p.nonlinearity_derivative = [](double) { return 1.0; };
  std::mt19937_64 rng(4);
  const DGSpace space(structured(3), 2);
  AssemblyConfig cfg;
  SparseSymMatrix expected = assemble_bilinear(space, cfg);
  expected.add_scaled(assemble_mass(space, cfg.volume_quad(2)), 1.0);
  const SparseSymMatrix j = assemble_jacobian(space, random_field(space, rng), p, cfg);
  EXPECT_LE(max_entry_difference(j, expected), 1e-12 * expected.max_abs());
}

TEST(Jacobian, CentralDifference) {
  std::mt19937_64 rng(5);
  const Problem p = sine_problem();
  const double eps = 1e-6;
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(structured(3), r);
    const DGVector u = random_field(space, rng);
    const DGVector d = random_field(space, rng);
    DGVector up = u, um = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
      up[i] += eps * d[i];
      um[i] -= eps * d[i];
    }
    const auto rp = assemble_residual(space, up, p, {});
    const auto rm = assemble_residual(space, um, p, {});
    const auto jd = assemble_jacobian(space, u, p, {}) * d.values();
    std::vector<double> diff(jd.size());
    for (std::size_t i = 0; i < jd.size(); ++i) diff[i] = (rp[i] - rm[i]) / (2 * eps) - jd[i];
    EXPECT_LE(test::norm2(diff), 1e-6 * test::norm2(jd));
  }
}

TEST(Jacobian, CubicReactionIsNoSofterThanA) {
  std::mt19937_64 rng(6);
  const DGSpace space(structured(3), 2);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  const SparseSymMatrix j = assemble_jacobian(space, a, random_field(space, rng), sine_problem(), {});
  for (int s = 0; s < 20; ++s) {
    const DGVector v = random_field(space, rng);
    EXPECT_GE(j.bilinear(v.values(), v.values()), a.bilinear(v.values(), v.values()));
  }
}

TEST(FormOnExact, GalerkinConsistency) {
  // For smooth u vanishing on the boundary, a_h(u, v) = (-Laplace u, v).
  const Problem p = sine_problem();
  AssemblyConfig cfg;
  cfg.volume_degree = 12;
  cfg.edge_degree = 14;
  const DGSpace space(structured(4), 2);
  const auto lhs = apply_form_to_exact(space, *p.exact, cfg);
  const auto rhs = assemble_load(space, [&](Vec2 x) { return -p.exact->laplacian(x); }, 12);
  for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-11);
}
