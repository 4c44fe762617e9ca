#include "dgsl/verify.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>

#include "dgsl/analysis.hpp"
#include "dgsl/assembly.hpp"
#include "dgsl/errors.hpp"
#include "dgsl/newton.hpp"
#include "dgsl/quadrature.hpp"

namespace dgsl {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::shared_ptr<const TriMesh> structured(int n) {
  return std::make_shared<const TriMesh>(build_structured(n));
}

DGVector random_field(const DGSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  DGVector v(space);
  for (double& c : v.values()) c = unit(rng);
  return v;
}

Eigen::MatrixXd to_dense(const SparseSymMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) d(i, a.cols()[p]) = a.values()[p];
  return d;
}

/// Extreme eigenvalues of A v = mu D v.
std::pair<double, double> generalized_range(const SparseSymMatrix& a, const SparseSymMatrix& d) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(a), to_dense(d),
                                                               Eigen::EigenvaluesOnly);
  const auto& mu = es.eigenvalues();
  return {mu.minCoeff(), mu.maxCoeff()};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

SuiteResult quadrature_suite(const VerifyOptions&) {
  double worst = 0.0;
  for (int d = 1; d <= kMaxTriangleDegree; ++d) {
    const TriangleRule rule = triangle_rule(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(s - exact) / exact);
      }
    }
  }
  for (int d = 1; d <= kMaxEdgeDegree; ++d) {
    const EdgeRule rule = edge_rule(d);
    for (int k = 0; k <= d; ++k) {
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
      worst = std::max(worst, std::abs(s - 1.0 / (k + 1)) * (k + 1));
    }
  }
  return {"quadrature", worst <= 1e-13,
          fmt("max relative monomial error %.3e over triangle degrees 1-14, edge degrees 1-20",
              worst)};
}

SuiteResult symmetry_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  const Problem problem = sine_problem();
  double worst = 0.0;
  auto check = [&](const SparseSymMatrix& m) {
    worst = std::max(worst, m.symmetry_defect() / m.max_abs());
  };
  std::vector<std::shared_ptr<const TriMesh>> meshes = {structured(2), structured(4), structured(8)};
  meshes.push_back(std::make_shared<const TriMesh>(build_perturbed(4, 0.2, opt.seed)));
  for (const auto& mesh : meshes) {
    for (int r = 1; r <= 3; ++r) {
      const DGSpace space(mesh, r);
      const SparseSymMatrix a = assemble_bilinear(space, cfg);
      check(a);
      check(reference::assemble_bilinear(space, cfg));
      check(assemble_dg_norm_matrix(space, cfg));
      check(assemble_mass(space, 2 * r));
      check(assemble_jacobian(space, a, random_field(space, rng), problem, cfg));
    }
  }
  return {"symmetry", worst <= 1e-12,
          fmt("max relative symmetry defect %.3e (bilinear, reference, DG norm, mass, Jacobian)",
              worst)};
}

SuiteResult lemma2_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double worst = 0.0;
  int samples = 0;
  for (int n : {2, 4}) {
    const auto mesh = structured(n);
    for (int r = 1; r <= 3; ++r) {
      const DGSpace space(mesh, r);
      for (int s = 0; s < 50; ++s) {
        const DGVector v = random_field(space, rng);
        const DGVector wx = random_field(space, rng);
        const DGVector wy = random_field(space, rng);
        worst = std::max(worst, boundary_flux_identity(space, v, wx, wy).relative_residual());
        ++samples;
      }
    }
  }
  return {"lemma2", worst <= 1e-11,
          fmt("max relative identity residual %.3e over %.0f random pairs", worst, samples)};
}

SuiteResult continuity_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  double worst_sample = 0.0;
  double worst_sup = 0.0;
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(structured(4), r);
    const SparseSymMatrix a = assemble_bilinear(space, cfg);
    const SparseSymMatrix d = assemble_dg_norm_matrix(space, cfg);
    for (int s = 0; s < 100; ++s) {
      const DGVector w = random_field(space, rng);
      const DGVector v = random_field(space, rng);
      const double ratio = std::abs(a.bilinear(v.values(), w.values())) /
                           std::sqrt(d.bilinear(w.values(), w.values()) *
                                     d.bilinear(v.values(), v.values()));
      worst_sample = std::max(worst_sample, ratio);
    }
    const auto [lo, hi] = generalized_range(a, d);
    worst_sup = std::max({worst_sup, std::abs(lo), std::abs(hi)});
  }
  return {"continuity", worst_sample <= 3.0 && worst_sup <= 3.0,
          fmt("lambda=%g: max |a(w,v)|/(|||w||| |||v|||) %.4f over samples, %.4f supremum (bound 3)",
              cfg.penalty, worst_sample, worst_sup)};
}

SuiteResult coercivity_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(1000.0);
  double worst_sample = 1e300;
  double worst_inf = 1e300;
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(structured(4), r);
    const SparseSymMatrix a = assemble_bilinear(space, cfg);
    const SparseSymMatrix d = assemble_dg_norm_matrix(space, cfg);
    for (int s = 0; s < 100; ++s) {
      const DGVector v = random_field(space, rng);
      worst_sample = std::min(worst_sample, a.bilinear(v.values(), v.values()) /
                                                d.bilinear(v.values(), v.values()));
    }
    worst_inf = std::min(worst_inf, generalized_range(a, d).first);
  }
  return {"coercivity", worst_sample >= 0.25 && worst_inf >= 0.25,
          fmt("lambda=%g: min a(v,v)/|||v|||^2 %.4f over samples, %.4f infimum (bound 0.25)",
              cfg.penalty, worst_sample, worst_inf)};
}

SuiteResult jacobian_suite(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  const Problem problem = sine_problem();
  constexpr double eps = 1e-6;
  double worst = 0.0;
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(structured(4), r);
    const SparseSymMatrix a = assemble_bilinear(space, cfg);
    for (int s = 0; s < 3; ++s) {
      const DGVector u = random_field(space, rng);
      const DGVector dir = random_field(space, rng);
      DGVector up = u, um = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        up[i] += eps * dir[i];
        um[i] -= eps * dir[i];
      }
      const auto rp = assemble_residual(space, a, up, problem, cfg);
      const auto rm = assemble_residual(space, a, um, problem, cfg);
      const auto jd = assemble_jacobian(space, a, u, problem, cfg) * dir.values();
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < jd.size(); ++i) {
        const double fd = (rp[i] - rm[i]) / (2.0 * eps);
        num += (fd - jd[i]) * (fd - jd[i]);
        den += jd[i] * jd[i];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  return {"jacobian", worst <= 1e-6,
          fmt("max relative ||J d - central difference|| %.3e (step 1e-6)", worst)};
}

SuiteResult newton_suite(const VerifyOptions& opt) {
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  const DGSpace space(structured(16), 1);
  const NewtonResult res = solve_semilinear(space, sine_problem(), cfg);
  const auto& hist = res.report.residual_norms;
  // Pairs whose successor sits near the final stagnation level measure rounding, not the rate.
  const double floor = 100.0 * hist.back();
  std::vector<double> x, y;
  for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
    if (hist[k + 1] <= floor) continue;
    x.push_back(std::log(hist[k]));
    y.push_back(std::log(hist[k + 1]));
  }
  std::string history;
  for (double r : hist) history += fmt(" %.2e", r);
  if (x.size() < 2)
    return {"newton", false, "too few residual pairs above the rounding floor:" + history};
  const double p = slope(x, y);
  return {"newton", p >= 1.7 && p <= 2.3,
          fmt("fitted order %.3f from %.0f residual pairs; history:", p, x.size()) + history};
}

SuiteResult rates_suite(const VerifyOptions& opt) {
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  const ExactSolution exact = *sine_problem().exact;
  bool ok = true;
  std::string detail;
  for (int r = 1; r <= 3; ++r) {
    std::vector<double> logh, logp, logi;
    for (int n : {8, 16, 32}) {
      const DGSpace space(structured(n), r);
      logh.push_back(std::log(1.0 / n));
      logp.push_back(std::log(l2_error(space, elliptic_project(space, exact, cfg), exact)));
      logi.push_back(
          std::log(dg_error(space, interpolate(space, exact.value), exact, cfg.penalty)));
    }
    const double pl2 = slope(logh, logp);
    const double pdg = slope(logh, logi);
    ok = ok && std::abs(pl2 - (r + 1)) <= 0.15 && std::abs(pdg - r) <= 0.15;
    detail += fmt("r=%.0f: projection L2 rate %.3f, ", r, pl2) +
              fmt("interpolant DG rate %.3f; ", pdg);
  }
  detail.resize(detail.size() - 2);
  return {"rates", ok, detail};
}

SuiteResult trace_suite(const VerifyOptions&) {
  bool ok = true;
  std::string detail;
  for (int r = 1; r <= 3; ++r) {
    const double c8 = estimate_trace_constant(DGSpace(structured(8), r));
    const double c32 = estimate_trace_constant(DGSpace(structured(32), r));
    const double drift = std::abs(c8 - c32) / std::max(c8, c32);
    ok = ok && drift < 0.10 && c8 > 0.0;
    detail += fmt("r=%.0f: C_t %.5f (n=8), ", r, c8) + fmt("%.5f (n=32); ", c32);
  }
  detail.resize(detail.size() - 2);
  return {"trace", ok, detail};
}

SuiteResult l2dg_suite(const VerifyOptions& opt) {
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  bool ok = true;
  std::string detail;
  for (int r = 1; r <= 3; ++r) {
    const double b8 = l2_over_dg_bound(DGSpace(structured(8), r), cfg);
    const double b32 = l2_over_dg_bound(DGSpace(structured(32), r), cfg);
    const double drift = std::abs(b8 - b32) / std::max(b8, b32);
    ok = ok && drift < 0.20;
    detail += fmt("r=%.0f: sup ||v||_0/|||v|||_h %.5f (n=8), ", r, b8) + fmt("%.5f (n=32); ", b32);
  }
  detail.resize(detail.size() - 2);
  return {"l2dg", ok, detail};
}

SuiteResult consistency_suite(const VerifyOptions& opt) {
  const Problem problem = sine_problem();
  const double source_defect = manufactured_consistency_defect(problem, 200, opt.seed);
  const double gradient_defect = gradient_consistency_defect(*problem.exact, 200, opt.seed);

  // a_h(u, v) = (-Laplace u, v) for the smooth solution (Galerkin consistency).
  AssemblyConfig cfg;
  cfg.penalty = opt.penalty.value_or(100.0);
  cfg.volume_degree = kMaxTriangleDegree;
  cfg.edge_degree = kMaxEdgeDegree;
  double galerkin = 0.0;
  for (int r = 1; r <= 3; ++r) {
    const DGSpace space(structured(8), r);
    const auto lhs = apply_form_to_exact(space, *problem.exact, cfg);
    const auto& lap = problem.exact->laplacian;
    const auto rhs = assemble_load(space, [&](Vec2 x) { return -lap(x); }, kMaxTriangleDegree);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      num = std::max(num, std::abs(lhs[i] - rhs[i]));
      den = std::max(den, std::abs(rhs[i]));
    }
    galerkin = std::max(galerkin, num / den);
  }
  const bool ok = source_defect <= 1e-10 && gradient_defect <= 1e-8 && galerkin <= 1e-10;
  return {"consistency", ok,
          fmt("source defect %.2e, gradient defect %.2e, a_h(u,v) - (-Laplace u, v) %.2e",
              source_defect, gradient_defect, galerkin)};
}

using SuiteFn = SuiteResult (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"quadrature", quadrature_suite}, {"symmetry", symmetry_suite},
      {"lemma2", lemma2_suite},         {"continuity", continuity_suite},
      {"coercivity", coercivity_suite}, {"jacobian", jacobian_suite},
      {"newton", newton_suite},         {"rates", rates_suite},
      {"trace", trace_suite},           {"l2dg", l2dg_suite},
      {"consistency", consistency_suite}};
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<SuiteResult> run_property_suite(const std::string& selector,
                                            const VerifyOptions& options) {
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : registry()) {
    if (selector == "all" || selector == name) results.push_back(fn(options));
  }
  if (results.empty()) throw ConfigError("unknown verify suite '" + selector + "'");
  return results;
}

}  // namespace dgsl
