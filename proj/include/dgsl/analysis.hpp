#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dgsl/assembly.hpp"
#include "dgsl/dg_space.hpp"
#include "dgsl/linear_solver.hpp"
#include "dgsl/problem.hpp"

namespace dgsl {

/// Norm quadrature degree used throughout the error analysis.
inline int analysis_degree(int r) { return 2 * r + 4; }

/// (sum_K int_K (u - v_h)^2)^{1/2}.
double l2_error(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                std::optional<int> quad_degree = std::nullopt);

/// ||v_h||_0.
double l2_norm(const DGSpace& space, const DGVector& v,
               std::optional<int> quad_degree = std::nullopt);

/// Squared contributions of the three DG-norm terms.
struct DGNormParts {
  double gradient = 0.0;  // sum_K ||grad w||^2_K
  double average = 0.0;   // sum_e (h_e / lambda) ||{grad w}||^2_e
  double jump = 0.0;      // sum_e (lambda / h_e) ||[w]||^2_e

  /// sqrt(gradient + average + jump).
  double total() const;
};

/// DG-norm parts of w = u - v_h. The exact gradient enters {grad w} directly;
/// jumps of u vanish on interior edges and [w] = (u - v_h) n on the boundary.
DGNormParts dg_error_parts(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                           double penalty, std::optional<int> quad_degree = std::nullopt);
double dg_error(const DGSpace& space, const DGVector& v, const ExactSolution& exact,
                double penalty, std::optional<int> quad_degree = std::nullopt);

/// |||v_h|||_h for a discrete field.
DGNormParts dg_norm_parts(const DGSpace& space, const DGVector& v, double penalty,
                          std::optional<int> quad_degree = std::nullopt);
double dg_norm_discrete(const DGSpace& space, const DGVector& v, double penalty,
                        std::optional<int> quad_degree = std::nullopt);

/// P_h w: the solution of a_h(P_h w, v) = a_h(w, v) for all v in V_h.
DGVector elliptic_project(const DGSpace& space, const ExactSolution& w, const AssemblyConfig& cfg,
                          const LinearSolveOptions& options = LinearSolveOptions::direct());

struct LevelError {
  double h = 0.0;
  double error = 0.0;
};

/// order_i = log(e_{i-1} / e_i) / log(h_{i-1} / h_i); the first entry is empty.
/// Throws InsufficientLevels for fewer than two levels and InvalidArgument
/// unless h strictly decreases.
std::vector<std::optional<double>> observed_orders(std::span<const LevelError> levels);

/// ||v||^2_{0,e} / (h_e^{-1} ||v||^2_{0,K} + h_e |v|^2_{1,K}) for edge `local_edge` of `element`.
double trace_ratio(const DGSpace& space, const DGVector& v, int element, int local_edge);

/// Supremum of trace_ratio over V_h, all elements and edges, computed per
/// element as the largest generalized eigenvalue of (edge mass, scaled H^1 Gram).
double estimate_trace_constant(const DGSpace& space);

/// Both sides of the element-boundary identity
///   sum_K int_{dK} v w.n_K = sum_e int_e {w}.[v] + sum_{interior e} int_e {v}[w]
/// for a scalar field v and a vector field w = (wx, wy).
struct IdentitySides {
  double element_sum = 0.0;
  double edge_sum = 0.0;

  double relative_residual() const;
};
IdentitySides boundary_flux_identity(const DGSpace& space, const DGVector& v, const DGVector& wx,
                                     const DGVector& wy);

/// sup_{v in V_h} ||v||_0 / |||v|||_h, by power iteration on D^{-1} M.
double l2_over_dg_bound(const DGSpace& space, const AssemblyConfig& cfg, int iterations = 40);

}  // namespace dgsl
