#pragma once

#include <vector>

#include "dgsl/assembly.hpp"
#include "dgsl/dg_space.hpp"
#include "dgsl/linear_solver.hpp"
#include "dgsl/problem.hpp"

namespace dgsl {

enum class InitialGuess { zero, interpolant };

struct NewtonConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_iterations = 20;
  bool damping = true;
  double backtrack_factor = 0.5;
  int max_backtracks = 12;
  InitialGuess initial = InitialGuess::zero;
  ScalarField initial_field;  // used with InitialGuess::interpolant; defaults to the exact solution
  LinearSolveOptions linear = LinearSolveOptions::direct();

  /// Throws InvalidArgument on non-positive tolerances or max_iterations < 1.
  void validate() const;
};

struct NewtonReport {
  std::vector<double> residual_norms;  // ||R(u^k)||_2, k = 0, 1, ...
  std::vector<LinearSolveReport> linear_solves;
  double residual_floor = 0.0;  // eps || |A||u| + |A u - R| || at the last iterate
  bool converged = false;

  int iterations() const { return static_cast<int>(linear_solves.size()); }
};

/// Raised when the iteration budget is exhausted before convergence.
class NewtonNotConverged : public Error {
public:
  NewtonNotConverged(const std::string& what, NewtonReport report)
      : Error(what), report_(std::move(report)) {}
  const NewtonReport& report() const { return report_; }

private:
  NewtonReport report_;
};

struct NewtonResult {
  DGVector solution;
  NewtonReport report;
};

/// Solves a_h(u_h, v) = (f(u_h), v) for all v by Newton's method with the
/// exact Jacobian A - M(f_u(u_h)) and optional backtracking. Converged means
/// ||R|| <= max(abs_tol, rel_tol ||R(u^0)||, residual_floor): a residual at the
/// rounding level of its own evaluation cannot be reduced further, and fine
/// meshes reach that level above the default tolerances.
NewtonResult solve_semilinear(const DGSpace& space, const Problem& problem,
                              const AssemblyConfig& cfg, const NewtonConfig& ncfg = {});

}  // namespace dgsl
