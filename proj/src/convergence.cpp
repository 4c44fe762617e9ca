#include "dgsl/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "dgsl/analysis.hpp"
#include "dgsl/mesh.hpp"
#include "dgsl/newton.hpp"
#include "dgsl/problem.hpp"

namespace dgsl {

void ConvergenceReport::add_row(ConvergenceRow row) {
  rows.push_back(row);
  if (rows.size() < 2) return;
  std::vector<LevelError> l2, dg;
  for (const auto& r : rows) {
    l2.push_back({r.h, r.l2_error});
    dg.push_back({r.h, r.dg_error});
  }
  const auto l2_orders = observed_orders(l2);
  const auto dg_orders = observed_orders(dg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].l2_order = l2_orders[i];
    rows[i].dg_order = dg_orders[i];
  }
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string order_text(const std::optional<double>& o, const char* empty) {
  return o ? fmt("%.2f", *o) : std::string(empty);
}

// 1/n when h is the reciprocal of an integer, decimal otherwise.
std::string h_text(double h) {
  const double n = 1.0 / h;
  if (std::abs(n - std::round(n)) < 1e-9 && n >= 1.0) return "1/" + fmt("%.0f", std::round(n));
  return fmt("%.4g", h);
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "h,l2_error,l2_order,dg_error,dg_order,newton_iters,dofs\n";
  for (const auto& r : report.rows) {
    out << fmt("%.10g", r.h) << ',' << fmt("%.6e", r.l2_error) << ','
        << (r.l2_order ? fmt("%.4f", *r.l2_order) : "") << ',' << fmt("%.6e", r.dg_error) << ','
        << (r.dg_order ? fmt("%.4f", *r.dg_order) : "") << ',' << r.newton_iterations << ','
        << r.dofs << '\n';
  }
  return out.str();
}

std::string to_markdown(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "r = " << report.degree << ", lambda = " << fmt("%g", report.penalty) << ", "
      << report.mesh_family << " mesh, problem " << report.problem << "\n\n";
  out << "| h        | ||u-u_h||_0 | order | |||u-u_h|||_h | order |\n";
  out << "|----------|-------------|-------|---------------|-------|\n";
  for (const auto& r : report.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "| %-8s | %-11s | %-5s | %-13s | %-5s |\n",
                  h_text(r.h).c_str(), fmt("%.2E", r.l2_error).c_str(),
                  order_text(r.l2_order, "--").c_str(), fmt("%.2E", r.dg_error).c_str(),
                  order_text(r.dg_order, "--").c_str());
    out << line;
  }
  return out.str();
}

std::string format_report(const ConvergenceReport& report, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(report) : to_markdown(report);
}

namespace {

std::shared_ptr<const TriMesh> level_mesh(const RunConfig& cfg, int level) {
  switch (cfg.mesh_kind) {
    case MeshKind::structured:
      return std::make_shared<const TriMesh>(build_structured(cfg.levels[level]));
    case MeshKind::perturbed:
      return std::make_shared<const TriMesh>(
          build_perturbed(cfg.levels[level], cfg.amplitude, cfg.seed));
    case MeshKind::files:
      return std::make_shared<const TriMesh>(read_mesh_file(cfg.files[level]));
  }
  throw ConfigError("unknown mesh kind");
}

const char* family_name(MeshKind kind) {
  switch (kind) {
    case MeshKind::structured: return "structured";
    case MeshKind::perturbed: return "perturbed";
    case MeshKind::files: return "imported";
  }
  return "?";
}

}  // namespace

ConvergenceReport run_convergence(const RunConfig& cfg) {
  cfg.validate();
  const Problem problem = make_problem(cfg.problem);
  if (!problem.exact) throw ConfigError("problem '" + cfg.problem + "' has no exact solution");
  const AssemblyConfig acfg = cfg.assembly();
  const int r = cfg.degree;

  ConvergenceReport report;
  report.problem = cfg.problem;
  report.degree = r;
  report.penalty = cfg.penalty;
  report.mesh_family = family_name(cfg.mesh_kind);
  report.volume_degree = acfg.volume_quad(r);
  report.edge_degree = acfg.edge_quad(r);
  report.analysis_degree = cfg.analysis_degree.value_or(analysis_degree(r));

  for (int level = 0; level < cfg.num_levels(); ++level) {
    try {
      const auto mesh = level_mesh(cfg, level);
      const DGSpace space(mesh, r);
      const NewtonResult result = solve_semilinear(space, problem, acfg, cfg.newton);
      ConvergenceRow row;
      row.h = mesh->nominal_h();
      row.l2_error = l2_error(space, result.solution, *problem.exact, report.analysis_degree);
      row.dg_error = dg_error(space, result.solution, *problem.exact, cfg.penalty,
                              report.analysis_degree);
      row.newton_iterations = result.report.iterations();
      const auto& vals = result.solution.values();
      const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
      for (auto& w : monotonicity_warnings(problem, *lo, *hi))
        report.warnings.push_back("level " + std::to_string(level + 1) + ": " + w);
      row.dofs = space.total_dofs();
      report.add_row(row);
    } catch (const Error& e) {
      throw RunFailure("level " + std::to_string(level + 1) + ": " + e.what(), report);
    }
  }
  return report;
}

PenaltySweep run_lambda_sweep(const RunConfig& base, std::span<const double> penalties) {
  PenaltySweep sweep;
  for (double p : penalties) {
    RunConfig cfg = base;
    cfg.penalty = p;
    cfg.sweep_penalties.clear();
    sweep.reports.push_back(run_convergence(cfg));
  }

  std::ostringstream note;
  if (sweep.reports.size() >= 2) {
    bool dg_decreasing = true;
    bool l2_increasing = true;
    for (std::size_t i = 1; i < sweep.reports.size(); ++i) {
      const auto& prev = sweep.reports[i - 1].rows.back();
      const auto& cur = sweep.reports[i].rows.back();
      dg_decreasing = dg_decreasing && cur.dg_error < prev.dg_error;
      l2_increasing = l2_increasing && cur.l2_error > prev.l2_error;
    }
    note << "finest level: DG error " << (dg_decreasing ? "decreases" : "does not decrease monotonically")
         << " and L2 error " << (l2_increasing ? "increases" : "does not increase monotonically")
         << " as the penalty grows\n";
  }
  for (const auto& rep : sweep.reports) {
    const auto& row = rep.rows.back();
    note << "lambda = " << fmt("%g", rep.penalty) << ": L2 " << fmt("%.3e", row.l2_error) << ", DG "
         << fmt("%.3e", row.dg_error) << '\n';
  }
  sweep.summary = note.str();
  return sweep;
}

}  // namespace dgsl
