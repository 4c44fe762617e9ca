#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgsl/assembly.hpp"
#include "dgsl/newton.hpp"

namespace dgsl {

/// Flat `key = value` settings with dotted keys. Later assignments win.
class KeyValues {
public:
  /// Parses a config file body; '#' starts a comment line. Throws ConfigError.
  static KeyValues parse(std::string_view text);
  static KeyValues read_file(const std::string& path);

  /// Applies a `key=value` override.
  void set(std::string_view assignment);
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

private:
  std::map<std::string, std::string> entries_;
};

enum class MeshKind { structured, perturbed, files };
enum class OutputFormat { csv, markdown };

struct RunConfig {
  std::string problem = "sine";
  int degree = 1;
  double penalty = 100.0;
  MeshKind mesh_kind = MeshKind::structured;
  std::vector<int> levels;           // n per level (structured, perturbed)
  std::vector<std::string> files;    // mesh files per level (files)
  double amplitude = 0.2;
  std::uint64_t seed = 42;
  NewtonConfig newton;
  std::optional<int> volume_degree;
  std::optional<int> edge_degree;
  std::optional<int> analysis_degree;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;           // empty: standard output
  std::vector<double> sweep_penalties;  // non-empty: run a penalty sweep

  AssemblyConfig assembly() const;
  int num_levels() const;
  /// Throws ConfigError on an empty level list or missing mesh files.
  void validate() const;
};

/// Builds a RunConfig from settings. Recognised keys:
///   problem.name  dg.degree  dg.penalty
///   mesh.kind (structured|perturbed|files)  mesh.levels  mesh.amplitude  mesh.seed
///   newton.abs_tol  newton.rel_tol  newton.max_iter  newton.damping  newton.initial (zero|interpolant)
///   linear.tol  linear.max_iter
///   quad.volume_degree  quad.edge_degree  quad.analysis_degree
///   output.format (csv|markdown)  output.path  sweep.penalties
/// Unknown keys and malformed values raise ConfigError.
RunConfig make_run_config(const KeyValues& kv);

}  // namespace dgsl
