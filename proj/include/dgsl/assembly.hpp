#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dgsl/dg_space.hpp"
#include "dgsl/problem.hpp"
#include "dgsl/sparse.hpp"

namespace dgsl {

struct AssemblyConfig {
  double penalty = 100.0;             // lambda; the jump term is weighted by lambda / h_e
  std::optional<int> volume_degree;   // default 3r + 1
  std::optional<int> edge_degree;     // default 2r + 2

  int volume_quad(int r) const { return volume_degree.value_or(3 * r + 1); }
  int edge_quad(int r) const { return edge_degree.value_or(2 * r + 2); }
  /// Throws InvalidArgument unless penalty > 0.
  void validate() const;
};

/// Selects the terms of a_h, for term-by-term checks:
///   volume       sum_K (grad w, grad v)_K
///   consistency  - sum_e {grad w}.[v] - sum_e {grad v}.[w]
///   penalty      sum_e (lambda / h_e) [w].[v]
struct FormTerms {
  bool volume = true;
  bool consistency = true;
  bool penalty = true;
};

/// Element-block sparsity: block (K, L) is present iff K == L or K and L share an edge.
SparseSymMatrix dg_block_pattern(const DGSpace& space);

/// Matrix of the symmetric interior penalty form: v^T A w = a_h(w, v).
SparseSymMatrix assemble_bilinear(const DGSpace& space, const AssemblyConfig& cfg,
                                  FormTerms terms = {});

/// Gram matrix of the DG norm: v^T D v = sum_K |grad v|^2_K
///   + sum_e (h_e / lambda) |{grad v}|^2_e + sum_e (lambda / h_e) |[v]|^2_e.
SparseSymMatrix assemble_dg_norm_matrix(const DGSpace& space, const AssemblyConfig& cfg);

/// Block-diagonal mass matrix with weight c(x) (1 when empty).
SparseSymMatrix assemble_mass(const DGSpace& space, int quad_degree,
                              const std::function<double(Vec2)>& weight = {});

/// (g, phi_i).
std::vector<double> assemble_load(const DGSpace& space, const std::function<double(Vec2)>& g,
                                  int quad_degree);

/// (f(x, u_h), phi_i) with the volume rule of cfg.
std::vector<double> assemble_nonlinear_load(const DGSpace& space, const DGVector& u,
                                            const Problem& problem, const AssemblyConfig& cfg);

/// residual_i = a_h(u_h, phi_i) - (f(u_h), phi_i).
std::vector<double> assemble_residual(const DGSpace& space, const DGVector& u,
                                      const Problem& problem, const AssemblyConfig& cfg);

/// Same as above with a pre-assembled a_h matrix.
std::vector<double> assemble_residual(const DGSpace& space, const SparseSymMatrix& bilinear,
                                      const DGVector& u, const Problem& problem,
                                      const AssemblyConfig& cfg);

/// J = A - M(f_u(u_h)), where M(c) is the mass matrix weighted by c.
SparseSymMatrix assemble_jacobian(const DGSpace& space, const DGVector& u, const Problem& problem,
                                  const AssemblyConfig& cfg);

/// Jacobian from a pre-assembled a_h matrix (copied, then the weighted mass is added).
SparseSymMatrix assemble_jacobian(const DGSpace& space, const SparseSymMatrix& bilinear,
                                  const DGVector& u, const Problem& problem,
                                  const AssemblyConfig& cfg);

/// b_i = a_h(w, phi_i) for a smooth w given analytically. Interior jumps of w
/// vanish; on boundary edges [w] = w n.
std::vector<double> apply_form_to_exact(const DGSpace& space, const ExactSolution& w,
                                        const AssemblyConfig& cfg);

namespace reference {

/// Serial assembly of a_h by an element loop followed by a single edge loop,
/// evaluating the basis directly at every quadrature point. Kept as an
/// independent check on the parallel kernels.
SparseSymMatrix assemble_bilinear(const DGSpace& space, const AssemblyConfig& cfg,
                                  FormTerms terms = {});

/// Serial, untabulated (f(x, u_h), phi_i).
std::vector<double> assemble_nonlinear_load(const DGSpace& space, const DGVector& u,
                                            const Problem& problem, const AssemblyConfig& cfg);

}  // namespace reference

}  // namespace dgsl
