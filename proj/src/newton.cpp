#include "dgsl/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dgsl/parallel.hpp"

namespace dgsl {

void NewtonConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidArgument("Newton tolerances must be positive");
  if (max_iterations < 1) throw InvalidArgument("Newton needs max_iterations >= 1");
  if (damping && !(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InvalidArgument("backtracking factor must lie in (0, 1)");
  }
}

namespace {

double norm2(std::span<const double> v) { return std::sqrt(deterministic_dot(v, v)); }

DGVector initial_iterate(const DGSpace& space, const Problem& problem, const NewtonConfig& ncfg) {
  if (ncfg.initial == InitialGuess::zero) return DGVector(space);
  if (ncfg.initial_field) return interpolate(space, ncfg.initial_field);
  if (!problem.exact) {
    throw InvalidArgument("interpolant initial guess needs a field or an exact solution");
  }
  return interpolate(space, problem.exact->value);
}

// Rounding level of R = A u - F(u) evaluated in floating point.
double residual_floor(const SparseSymMatrix& a, const DGVector& u, std::span<const double> res) {
  const auto& row_ptr = a.row_ptr();
  const auto& cols = a.cols();
  const auto& vals = a.values();
  std::vector<double> f(a.dim());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.dim(); ++i) {
    double au = 0.0;
    double abs_au = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      au += vals[p] * u[cols[p]];
      abs_au += std::abs(vals[p] * u[cols[p]]);
    }
    f[i] = abs_au + std::abs(au - res[i]);
  }
  return std::numeric_limits<double>::epsilon() * norm2(f);
}

}  // namespace

NewtonResult solve_semilinear(const DGSpace& space, const Problem& problem,
                              const AssemblyConfig& cfg, const NewtonConfig& ncfg) {
  cfg.validate();
  ncfg.validate();
  const SparseSymMatrix bilinear = assemble_bilinear(space, cfg);

  NewtonResult out{initial_iterate(space, problem, ncfg), {}};
  DGVector& u = out.solution;
  NewtonReport& report = out.report;

  std::vector<double> res = assemble_residual(space, bilinear, u, problem, cfg);
  double rnorm = norm2(res);
  report.residual_norms.push_back(rnorm);
  const double target = std::max(ncfg.abs_tol, ncfg.rel_tol * rnorm);
  report.residual_floor = residual_floor(bilinear, u, res);

  while (rnorm > std::max(target, report.residual_floor)) {
    if (report.iterations() >= ncfg.max_iterations) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << ncfg.max_iterations << " iterations (residual "
          << rnorm << ", target " << target << ")";
      throw NewtonNotConverged(msg.str(), report);
    }
    const SparseSymMatrix jac = assemble_jacobian(space, bilinear, u, problem, cfg);
    for (double& v : res) v = -v;
    LinearSolveResult step = solve_spd(jac, res, ncfg.linear);
    report.linear_solves.push_back(step.report);

    double alpha = 1.0;
    DGVector trial(space);
    std::vector<double> trial_res;
    double trial_norm = 0.0;
    double trial_floor = 0.0;
    for (int bt = 0;; ++bt) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + alpha * step.x[i];
      trial_res = assemble_residual(space, bilinear, trial, problem, cfg);
      trial_norm = norm2(trial_res);
      trial_floor = residual_floor(bilinear, trial, trial_res);
      if (!ncfg.damping || trial_norm < rnorm || trial_norm <= std::max(target, trial_floor)) break;
      if (bt + 1 >= ncfg.max_backtracks) {
        std::ostringstream msg;
        msg << "Newton step failed to reduce the residual " << rnorm << " after " << ncfg.max_backtracks
            << " backtracking steps";
        throw NewtonDiverged(msg.str());
      }
      alpha *= ncfg.backtrack_factor;
    }
    u = std::move(trial);
    res = std::move(trial_res);
    rnorm = trial_norm;
    report.residual_norms.push_back(rnorm);
    report.residual_floor = trial_floor;
  }
  report.converged = true;
  return out;
}

}  // namespace dgsl
