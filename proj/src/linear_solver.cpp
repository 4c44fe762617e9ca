#include "dgsl/linear_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "dgsl/parallel.hpp"

namespace dgsl {

namespace {

// Inverse of each diagonal block, row-major, via Cholesky.
class BlockJacobi {
public:
  BlockJacobi(const SparseSymMatrix& a, int block) : block_(block) {
    const int nblocks = a.dim() / block;
    inverses_.resize(static_cast<std::size_t>(a.dim()) * block);
    bool indefinite = false;
#pragma omp parallel for schedule(static) reduction(|| : indefinite)
    for (int k = 0; k < nblocks; ++k) {
      Eigen::MatrixXd m(block, block);
      for (int i = 0; i < block; ++i) {
        for (int j = 0; j < block; ++j) m(i, j) = a.at(k * block + i, k * block + j);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(m);
      if (llt.info() != Eigen::Success) {
        indefinite = true;
        continue;
      }
      const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(block, block));
      double* dst = inverses_.data() + static_cast<std::size_t>(k) * block * block;
      for (int i = 0; i < block; ++i) {
        for (int j = 0; j < block; ++j) dst[i * block + j] = inv(i, j);
      }
    }
    if (indefinite) {
      throw IndefiniteOperator("a diagonal block is not positive definite; increase the penalty");
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    const int nblocks = static_cast<int>(r.size()) / block_;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < nblocks; ++k) {
      const double* inv = inverses_.data() + static_cast<std::size_t>(k) * block_ * block_;
      for (int i = 0; i < block_; ++i) {
        double s = 0.0;
        for (int j = 0; j < block_; ++j) s += inv[i * block_ + j] * r[k * block_ + j];
        z[k * block_ + i] = s;
      }
    }
  }

private:
  int block_;
  std::vector<double> inverses_;
};

// Sparse Cholesky factor of A (AMD ordering), applied as z = A^{-1} r.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const SparseSymMatrix& a) {
    using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> am(a.dim(), a.dim(), static_cast<Eigen::Index>(a.nnz()),
                                        a.row_ptr().data(), a.cols().data(), a.values().data());
    llt_.compute(Eigen::SparseMatrix<double>(am));
    if (llt_.info() != Eigen::Success) {
      throw IndefiniteOperator("Cholesky factorization failed; the operator is not positive "
                               "definite (increase the penalty)");
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    Eigen::Map<Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size())) = llt_.solve(rv);
  }

private:
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

class Preconditioning {
public:
  Preconditioning(const SparseSymMatrix& a, const LinearSolveOptions& options) {
    switch (options.preconditioner) {
      case Preconditioner::jacobi: blocks_.emplace(a, 1); break;
      case Preconditioner::block_jacobi: blocks_.emplace(a, a.block_size()); break;
      case Preconditioner::cholesky: factor_.emplace(a); break;
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    if (factor_) factor_->apply(r, z);
    else blocks_->apply(r, z);
  }

private:
  std::optional<BlockJacobi> blocks_;
  std::optional<CholeskyFactor> factor_;
};

double norm2(std::span<const double> v) { return std::sqrt(deterministic_dot(v, v)); }

// Residual level reachable in floating point: a multiple of eps * || |A| |x| + |b| ||.
double attainable_floor(const SparseSymMatrix& a, std::span<const double> x,
                        std::span<const double> b) {
  const auto& row_ptr = a.row_ptr();
  const auto& cols = a.cols();
  const auto& vals = a.values();
  std::vector<double> f(a.dim());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.dim(); ++i) {
    double s = std::abs(b[i]);
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += std::abs(vals[p] * x[cols[p]]);
    f[i] = s;
  }
  return 64.0 * std::numeric_limits<double>::epsilon() * norm2(f);
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

LinearSolveResult solve_spd(const SparseSymMatrix& a, std::span<const double> b,
                            const LinearSolveOptions& options) {
  const int n = a.dim();
  if (static_cast<int>(b.size()) != n) throw InvalidArgument("right-hand side size mismatch");
  const int max_iter = options.max_iter > 0 ? options.max_iter : 10 * n;
  const Preconditioning precond(a, options);

  LinearSolveResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.report.converged = true;
    return out;
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  auto& x = out.x;
  int it = 0;

  // Outer loop restarts from the true residual if the recursive one drifted.
  for (int restart = 0; restart < 5; ++restart) {
    precond.apply(r, z);
    p = z;
    double rz = deterministic_dot(r, z);
    double rnorm = norm2(r);
    while (rnorm > options.tol * bnorm && it < max_iter) {
      a.multiply(p, ap);
      const double curvature = deterministic_dot(p, ap);
      if (!(curvature > 0.0)) {
        throw IndefiniteOperator("non-positive curvature p^T A p = " + std::to_string(curvature) +
                                 " at iteration " + std::to_string(it) + "; increase the penalty");
      }
      const double alpha = rz / curvature;
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      precond.apply(r, z);
      const double rz_new = deterministic_dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
      rnorm = norm2(r);
      ++it;
    }

    a.multiply(x, ap);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    const double true_rel = norm2(r) / bnorm;
    out.report.iterations = it;
    out.report.relative_residual = true_rel;
    if (true_rel <= options.tol || true_rel * bnorm <= attainable_floor(a, x, b)) {
      out.report.converged = true;
      return out;
    }
    if (it >= max_iter) break;
  }
  throw NotConverged("conjugate gradients stopped at relative residual " +
                         fmt_sci(out.report.relative_residual) + " after " +
                         std::to_string(it) + " iterations",
                     out.report);
}

}  // namespace dgsl
