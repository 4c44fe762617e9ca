#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgsl/assembly.hpp"
#include "dgsl/errors.hpp"
#include "dgsl/linear_solver.hpp"
#include "dgsl/newton.hpp"
#include "test_util.hpp"

using namespace dgsl;
using dgsl::test::norm2;
using dgsl::test::random_field;
using dgsl::test::structured;

namespace {

SparseSymMatrix diagonal(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  std::vector<int> rp(n + 1), cols(n);
  for (int i = 0; i < n; ++i) {
    rp[i + 1] = i + 1;
    cols[i] = i;
  }
  return SparseSymMatrix(n, rp, cols, d);
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unit(rng);
  return v;
}

}  // namespace

TEST(SolveSpd, Diagonal) {
  const std::vector<double> d = {2.0, 4.0, 0.5, 8.0};
  const std::vector<double> b = {1.0, -3.0, 2.0, 0.25};
  for (Preconditioner p :
       {Preconditioner::jacobi, Preconditioner::block_jacobi, Preconditioner::cholesky}) {
    LinearSolveOptions opt;
    opt.preconditioner = p;
    const auto res = solve_spd(diagonal(d), b, opt);
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(res.x[i], b[i] / d[i]);
    EXPECT_TRUE(res.report.converged);
  }
}

TEST(SolveSpd, ZeroRightHandSide) {
  const auto res = solve_spd(diagonal({1.0, 2.0}), std::vector<double>{0.0, 0.0});
  EXPECT_EQ(res.x[0], 0.0);
  EXPECT_EQ(res.report.iterations, 0);
}

TEST(SolveSpd, ManufacturedSystem) {
  const DGSpace space(structured(4), 1);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  const auto xs = random_vector(a.dim(), 3);
  const auto b = a * xs;
  LinearSolveOptions opt;
  opt.tol = 1e-10;
  for (Preconditioner p :
       {Preconditioner::jacobi, Preconditioner::block_jacobi, Preconditioner::cholesky}) {
    opt.preconditioner = p;
    const auto res = solve_spd(a, b, opt);
    std::vector<double> err(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) err[i] = res.x[i] - xs[i];
    EXPECT_LE(norm2(err) / norm2(xs), 1e-8);
    const auto ax = a * res.x;
    std::vector<double> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = ax[i] - b[i];
    EXPECT_NEAR(res.report.relative_residual, norm2(r) / norm2(b), 1e-14);
    EXPECT_LE(res.report.relative_residual, 1e-10);
  }
}

TEST(SolveSpd, Deterministic) {
  const DGSpace space(structured(4), 2);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  const auto b = random_vector(a.dim(), 4);
  const auto x1 = solve_spd(a, b).x;
  const auto x2 = solve_spd(a, b).x;
  EXPECT_EQ(x1, x2);
}

TEST(SolveSpd, SmallPenaltyIsDetectedAsIndefinite) {
  const DGSpace space(structured(4), 2);
  AssemblyConfig cfg;
  cfg.penalty = 0.01;
  const SparseSymMatrix a = assemble_bilinear(space, cfg);
  EXPECT_THROW(solve_spd(a, random_vector(a.dim(), 5)), IndefiniteOperator);
  EXPECT_THROW(solve_spd(a, random_vector(a.dim(), 5), LinearSolveOptions::direct()),
               IndefiniteOperator);
}

TEST(SolveSpd, CholeskyNeedsFewIterations) {
  const DGSpace space(structured(16), 3);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  const auto res = solve_spd(a, random_vector(a.dim(), 7), LinearSolveOptions::direct());
  EXPECT_TRUE(res.report.converged);
  EXPECT_LE(res.report.iterations, 5);
  EXPECT_LE(res.report.relative_residual, 1e-12);
}

TEST(SolveSpd, IterationBudget) {
  const DGSpace space(structured(8), 1);
  const SparseSymMatrix a = assemble_bilinear(space, {});
  LinearSolveOptions opt;
  opt.max_iter = 3;
  try {
    solve_spd(a, random_vector(a.dim(), 6), opt);
    FAIL() << "expected NotConverged";
  } catch (const NotConverged& e) {
    EXPECT_FALSE(e.report().converged);
    EXPECT_GT(e.report().relative_residual, 1e-12);
  }
}

TEST(SolveSpd, DimensionMismatch) {
  EXPECT_THROW(solve_spd(diagonal({1.0, 2.0}), std::vector<double>{1.0}), InvalidArgument);
}

TEST(Newton, LinearProblemTakesOneStep) {
  Problem p = sine_problem();
  p.nonlinearity = [](double) { return 0.0; };
  p.nonlinearity_derivative = [](double) { return 0.0; };
  const DGSpace space(structured(8), 2);
  const auto res = solve_semilinear(space, p, {});
  EXPECT_TRUE(res.report.converged);
  EXPECT_EQ(res.report.iterations(), 1);

  // Same answer as one direct linear solve.
  const SparseSymMatrix a = assemble_bilinear(space, {});
  LinearSolveOptions opt;
  const auto x = solve_spd(a, assemble_load(space, p.source, AssemblyConfig{}.volume_quad(2)), opt).x;
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(res.solution[i], x[i], 1e-9);
}

TEST(Newton, SineProblemConverges) {
  const DGSpace space(structured(16), 1);
  const Problem p = sine_problem();
  const auto res = solve_semilinear(space, p, {});
  EXPECT_TRUE(res.report.converged);
  EXPECT_LE(res.report.iterations(), 8);
  EXPECT_LE(res.report.residual_norms.back(), 1e-10);
  EXPECT_LE(norm2(assemble_residual(space, res.solution, p, {})), 1e-10);
}

TEST(Newton, UnreachableToleranceStopsAtRoundingFloor) {
  const DGSpace space(structured(16), 2);
  NewtonConfig ncfg;
  ncfg.abs_tol = 1e-30;
  ncfg.rel_tol = 1e-30;
  const auto res = solve_semilinear(space, sine_problem(), {}, ncfg);
  EXPECT_TRUE(res.report.converged);
  EXPECT_GT(res.report.residual_floor, 0.0);
  EXPECT_LE(res.report.residual_norms.back(), res.report.residual_floor);
  EXPECT_LE(res.report.iterations(), 8);
}

TEST(Newton, InterpolantStartNeedsNoMoreSteps) {
  const DGSpace space(structured(16), 1);
  NewtonConfig ncfg;
  ncfg.initial = InitialGuess::interpolant;
  const auto warm = solve_semilinear(space, sine_problem(), {}, ncfg);
  const auto cold = solve_semilinear(space, sine_problem(), {});
  EXPECT_TRUE(warm.report.converged);
  EXPECT_LE(warm.report.iterations(), cold.report.iterations());
}

TEST(Newton, QuadraticConvergence) {
  // log r_{k+1} against log r_k has slope 2; the constant C = r_{k+1} / r_k^2
  // stays of the same size on both meshes.
  std::vector<double> constants;
  for (int n : {8, 16}) {
    const DGSpace space(structured(n), 1);
    const auto hist = solve_semilinear(space, sine_problem(), {}).report.residual_norms;
    ASSERT_GE(hist.size(), 4u);
    const double floor = 100.0 * hist.back();
    std::vector<double> x, y;
    for (std::size_t k = 0; k + 1 < hist.size(); ++k)
      if (hist[k + 1] > floor) {
        x.push_back(std::log(hist[k]));
        y.push_back(std::log(hist[k + 1]));
      }
    ASSERT_GE(x.size(), 2u);
    const double slope = (y.back() - y[y.size() - 2]) / (x.back() - x[x.size() - 2]);
    EXPECT_GT(slope, 1.7);
    EXPECT_LT(slope, 2.3);
    constants.push_back(std::exp(y.back() - 2 * x.back()));
  }
  EXPECT_LT(std::abs(std::log(constants[0] / constants[1])), std::log(10.0));
}

TEST(Newton, BudgetExhausted) {
  const DGSpace space(structured(8), 1);
  NewtonConfig ncfg;
  ncfg.max_iterations = 1;
  try {
    solve_semilinear(space, sine_problem(), {}, ncfg);
    FAIL() << "expected NewtonNotConverged";
  } catch (const NewtonNotConverged& e) {
    EXPECT_FALSE(e.report().converged);
    EXPECT_EQ(e.report().iterations(), 1);
    EXPECT_EQ(e.report().residual_norms.size(), 2u);
  }
}

TEST(Newton, DivergenceWithoutDescent) {
  // N(u) = -u^3 with a wrong-sign derivative: Newton directions stop reducing the residual.
  Problem p = sine_problem();
  p.nonlinearity = [](double u) { return -50.0 * u * u * u; };
  p.nonlinearity_derivative = [](double u) { return 150.0 * u * u; };
  NewtonConfig ncfg;
  ncfg.max_backtracks = 2;
  const DGSpace space(structured(4), 1);
  EXPECT_THROW(solve_semilinear(space, p, {}, ncfg), Error);
}

TEST(Newton, ConfigValidation) {
  NewtonConfig ncfg;
  ncfg.max_iterations = 0;
  EXPECT_THROW(ncfg.validate(), InvalidArgument);
  ncfg = {};
  ncfg.abs_tol = -1.0;
  EXPECT_THROW(ncfg.validate(), InvalidArgument);
}
