// dgsl: convergence runs, property suites and mesh generation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgsl/config.hpp"
#include "dgsl/convergence.hpp"
#include "dgsl/errors.hpp"
#include "dgsl/mesh.hpp"
#include "dgsl/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitProperty = 4;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dgsl::ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string sweep_text(const std::vector<dgsl::ConvergenceReport>& reports,
                       dgsl::OutputFormat format) {
  std::string text;
  for (const auto& rep : reports) {
    if (format == dgsl::OutputFormat::csv) {
      char line[64];
      std::snprintf(line, sizeof line, "# penalty=%g\n", rep.penalty);
      text += line;
    } else if (!text.empty()) {
      text += '\n';
    }
    text += dgsl::format_report(rep, format);
  }
  return text;
}

void print_warnings(const dgsl::ConvergenceReport& rep) {
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
}

int run_command(const std::string& config_path, const std::vector<std::string>& sets) {
  dgsl::RunConfig cfg;
  try {
    dgsl::KeyValues kv = dgsl::KeyValues::read_file(config_path);
    for (const auto& s : sets) kv.set(s);
    cfg = dgsl::make_run_config(kv);
    cfg.validate();
  } catch (const dgsl::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (!cfg.sweep_penalties.empty()) {
      const dgsl::PenaltySweep sweep = dgsl::run_lambda_sweep(cfg, cfg.sweep_penalties);
      for (const auto& rep : sweep.reports) print_warnings(rep);
      write_output(cfg.output_path, sweep_text(sweep.reports, cfg.format));
      std::cerr << sweep.summary;
    } else {
      const dgsl::ConvergenceReport rep = dgsl::run_convergence(cfg);
      print_warnings(rep);
      write_output(cfg.output_path, dgsl::format_report(rep, cfg.format));
    }
  } catch (const dgsl::RunFailure& e) {
    try {
      write_output(cfg.output_path, dgsl::format_report(e.partial(), cfg.format));
    } catch (const dgsl::Error& w) {
      std::cerr << "error: " << w.what() << '\n';
    }
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const dgsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dgsl::Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

int verify_command(const std::string& suite, const std::vector<std::string>& sets) {
  dgsl::VerifyOptions options;
  try {
    dgsl::KeyValues kv;
    for (const auto& s : sets) kv.set(s);
    for (const auto& [key, value] : kv.entries()) {
      std::size_t used = 0;
      if (key == "dg.penalty") {
        options.penalty = std::stod(value, &used);
      } else if (key == "verify.seed") {
        options.seed = std::stoull(value, &used);
      } else {
        throw dgsl::ConfigError("unknown verify key '" + key + "'");
      }
      if (used != value.size()) throw dgsl::ConfigError("malformed value for '" + key + "'");
    }
  } catch (const dgsl::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::logic_error&) {
    std::cerr << "config error: malformed --set value\n";
    return kExitConfig;
  }

  std::vector<dgsl::SuiteResult> results;
  try {
    results = dgsl::run_property_suite(suite, options);
  } catch (const dgsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dgsl::Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }

  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kExitOk : kExitProperty;
}

int mesh_command(const std::string& kind, int n, double amplitude, std::uint64_t seed,
                 const std::string& out) {
  try {
    dgsl::TriMesh mesh = kind == "perturbed" ? dgsl::build_perturbed(n, amplitude, seed)
                                             : dgsl::build_structured(n);
    write_output(out == "-" ? "" : out, dgsl::export_mesh(mesh));
  } catch (const dgsl::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior penalty DG solver for semilinear elliptic problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> run_sets;
  auto* run = app.add_subcommand("run", "Run a mesh-refinement convergence study");
  run->add_option("--config", config_path, "key = value config file")->required();
  run->add_option("--set", run_sets, "Override a config key (key=value)");

  std::string suite = "all";
  std::vector<std::string> verify_sets;
  auto* verify = app.add_subcommand("verify", "Run property suites");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  verify->add_option("--set", verify_sets, "dg.penalty=<value> or verify.seed=<value>");

  auto* mesh = app.add_subcommand("mesh", "Mesh utilities");
  mesh->require_subcommand(1);
  std::string kind = "structured";
  int n = 0;
  double amplitude = 0.2;
  std::uint64_t seed = 42;
  std::string out = "-";
  auto* gen = mesh->add_subcommand("gen", "Generate a unit-square triangulation");
  gen->add_option("--kind", kind, "structured or perturbed")
      ->check(CLI::IsMember({"structured", "perturbed"}));
  gen->add_option("--n", n, "Cells per side")->required()->check(CLI::PositiveNumber);
  gen->add_option("--amplitude", amplitude, "Perturbation amplitude in units of 1/n");
  gen->add_option("--seed", seed, "Perturbation seed");
  gen->add_option("--out", out, "Output path, '-' for standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return run_command(config_path, run_sets);
  if (*verify) return verify_command(suite, verify_sets);
  return mesh_command(kind, n, amplitude, seed, out);
}
