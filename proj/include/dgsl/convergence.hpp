#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgsl/config.hpp"
#include "dgsl/errors.hpp"

namespace dgsl {

struct ConvergenceRow {
  double h = 0.0;
  double l2_error = 0.0;
  std::optional<double> l2_order;
  double dg_error = 0.0;
  std::optional<double> dg_order;
  int newton_iterations = 0;
  int dofs = 0;
};

struct ConvergenceReport {
  std::string problem;
  int degree = 0;
  double penalty = 0.0;
  std::string mesh_family;
  int volume_degree = 0;
  int edge_degree = 0;
  int analysis_degree = 0;
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> warnings;  // monotonicity warnings over the iterate range

  /// Appends a row and recomputes the order columns.
  void add_row(ConvergenceRow row);
};

/// CSV with header `h,l2_error,l2_order,dg_error,dg_order,newton_iters,dofs`;
/// the first row's order fields are empty.
std::string to_csv(const ConvergenceReport& report);
/// Aligned markdown table: h, ||u-u_h||_0, order, |||u-u_h|||_h, order.
std::string to_markdown(const ConvergenceReport& report);
std::string format_report(const ConvergenceReport& report, OutputFormat format);

/// Raised when a level fails; carries the rows completed before the failure.
class RunFailure : public Error {
public:
  RunFailure(const std::string& what, ConvergenceReport partial)
      : Error(what), partial_(std::move(partial)) {}
  const ConvergenceReport& partial() const { return partial_; }

private:
  ConvergenceReport partial_;
};

/// Solves the configured manufactured problem on every level and tabulates
/// L2 and DG errors with observed orders.
ConvergenceReport run_convergence(const RunConfig& cfg);

struct PenaltySweep {
  std::vector<ConvergenceReport> reports;  // one per penalty, in input order
  std::string summary;
};

/// run_convergence once per penalty, plus a note on how the finest-level
/// errors move with the penalty.
PenaltySweep run_lambda_sweep(const RunConfig& base, std::span<const double> penalties);

}  // namespace dgsl
