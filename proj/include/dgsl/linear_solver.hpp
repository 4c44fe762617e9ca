#pragma once

#include <span>
#include <vector>

#include "dgsl/errors.hpp"
#include "dgsl/sparse.hpp"

namespace dgsl {

struct LinearSolveReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||A x - b|| / ||b||
  bool converged = false;
};

/// cholesky preconditions with a sparse Cholesky factorization of A itself, so
/// CG only polishes the direct solve down to the requested residual.
enum class Preconditioner { jacobi, block_jacobi, cholesky };

struct LinearSolveOptions {
  double tol = 1e-12;  // relative residual
  int max_iter = 0;    // 0 means 10 * dimension
  Preconditioner preconditioner = Preconditioner::block_jacobi;

  static LinearSolveOptions direct() {
    LinearSolveOptions o;
    o.preconditioner = Preconditioner::cholesky;
    return o;
  }
};

/// Raised when the iteration budget runs out; carries the final report.
class NotConverged : public Error {
public:
  NotConverged(const std::string& what, LinearSolveReport report)
      : Error(what), report_(report) {}
  const LinearSolveReport& report() const { return report_; }

private:
  LinearSolveReport report_;
};

struct LinearSolveResult {
  std::vector<double> x;
  LinearSolveReport report;
};

/// Preconditioned conjugate gradients for a symmetric positive definite A.
///
/// Returns x with ||A x - b||_2 <= tol ||b||_2 (checked on the true residual).
/// Throws IndefiniteOperator if a direction of non-positive curvature or a
/// non-positive-definite diagonal block or failed factorization is met, NotConverged on budget exhaustion.
/// All reductions use a fixed order, so repeated solves are bit-identical.
LinearSolveResult solve_spd(const SparseSymMatrix& a, std::span<const double> b,
                            const LinearSolveOptions& options = {});

}  // namespace dgsl
