#include "dgsl/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dgsl/errors.hpp"
#include "dgsl/problem.hpp"

namespace dgsl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid value '" + text + "' for key '" + key + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "off" || text == "0" || text == "no") return false;
  throw ConfigError("invalid boolean '" + text + "' for key '" + key + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem.name",       "dg.degree",         "dg.penalty",          "mesh.kind",
      "mesh.levels",        "mesh.amplitude",    "mesh.seed",           "newton.abs_tol",
      "newton.rel_tol",     "newton.max_iter",   "newton.damping",      "newton.initial",
      "linear.tol",         "linear.max_iter",   "linear.preconditioner", "quad.volume_degree",  "quad.edge_degree",
      "quad.analysis_degree", "output.format",   "output.path",         "sweep.penalties"};
  return keys;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    kv.entries_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void KeyValues::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override with empty key");
  entries_[key] = trim(assignment.substr(eq + 1));
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

AssemblyConfig RunConfig::assembly() const {
  AssemblyConfig cfg;
  cfg.penalty = penalty;
  cfg.volume_degree = volume_degree;
  cfg.edge_degree = edge_degree;
  return cfg;
}

int RunConfig::num_levels() const {
  return static_cast<int>(mesh_kind == MeshKind::files ? files.size() : levels.size());
}

void RunConfig::validate() const {
  if (num_levels() == 0) throw ConfigError("mesh.levels is empty");
  if (!(penalty > 0.0)) throw ConfigError("dg.penalty must be positive");
  if (degree < 1 || degree > 3) throw ConfigError("dg.degree must be 1, 2 or 3");
  for (int n : levels) {
    if (n < 1) throw ConfigError("mesh levels must be positive integers");
  }
  for (const auto& f : files) {
    if (!std::filesystem::exists(f)) throw ConfigError("mesh file '" + f + "' does not exist");
  }
  for (double p : sweep_penalties) {
    if (!(p > 0.0)) throw ConfigError("sweep penalties must be positive");
  }
}

RunConfig make_run_config(const KeyValues& kv) {
  for (const auto& [key, value] : kv.entries()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig cfg;
  const auto get = [&](const char* key) { return kv.get(key); };

  if (auto v = get("problem.name")) {
    make_problem(*v);  // validates the name
    cfg.problem = *v;
  }
  if (auto v = get("dg.degree")) cfg.degree = parse_number<int>("dg.degree", *v);
  if (auto v = get("dg.penalty")) cfg.penalty = parse_number<double>("dg.penalty", *v);
  if (auto v = get("mesh.kind")) {
    if (*v == "structured") cfg.mesh_kind = MeshKind::structured;
    else if (*v == "perturbed") cfg.mesh_kind = MeshKind::perturbed;
    else if (*v == "files") cfg.mesh_kind = MeshKind::files;
    else throw ConfigError("mesh.kind must be structured, perturbed or files");
  }
  if (auto v = get("mesh.levels")) {
    for (const auto& item : split_list(*v)) {
      if (cfg.mesh_kind == MeshKind::files) cfg.files.push_back(item);
      else cfg.levels.push_back(parse_number<int>("mesh.levels", item));
    }
  }
  if (auto v = get("mesh.amplitude")) cfg.amplitude = parse_number<double>("mesh.amplitude", *v);
  if (auto v = get("mesh.seed")) cfg.seed = parse_number<std::uint64_t>("mesh.seed", *v);

  if (auto v = get("newton.abs_tol")) cfg.newton.abs_tol = parse_number<double>("newton.abs_tol", *v);
  if (auto v = get("newton.rel_tol")) cfg.newton.rel_tol = parse_number<double>("newton.rel_tol", *v);
  if (auto v = get("newton.max_iter")) cfg.newton.max_iterations = parse_number<int>("newton.max_iter", *v);
  if (auto v = get("newton.damping")) cfg.newton.damping = parse_bool("newton.damping", *v);
  if (auto v = get("newton.initial")) {
    if (*v == "zero") cfg.newton.initial = InitialGuess::zero;
    else if (*v == "interpolant") cfg.newton.initial = InitialGuess::interpolant;
    else throw ConfigError("newton.initial must be zero or interpolant");
  }
  if (auto v = get("linear.tol")) cfg.newton.linear.tol = parse_number<double>("linear.tol", *v);
  if (auto v = get("linear.preconditioner")) {
    if (*v == "jacobi") cfg.newton.linear.preconditioner = Preconditioner::jacobi;
    else if (*v == "block_jacobi") cfg.newton.linear.preconditioner = Preconditioner::block_jacobi;
    else if (*v == "cholesky") cfg.newton.linear.preconditioner = Preconditioner::cholesky;
    else throw ConfigError("linear.preconditioner must be jacobi, block_jacobi or cholesky");
  }
  if (auto v = get("linear.max_iter")) cfg.newton.linear.max_iter = parse_number<int>("linear.max_iter", *v);

  if (auto v = get("quad.volume_degree")) cfg.volume_degree = parse_number<int>("quad.volume_degree", *v);
  if (auto v = get("quad.edge_degree")) cfg.edge_degree = parse_number<int>("quad.edge_degree", *v);
  if (auto v = get("quad.analysis_degree")) cfg.analysis_degree = parse_number<int>("quad.analysis_degree", *v);

  if (auto v = get("output.format")) {
    if (*v == "csv") cfg.format = OutputFormat::csv;
    else if (*v == "markdown") cfg.format = OutputFormat::markdown;
    else throw ConfigError("output.format must be csv or markdown");
  }
  if (auto v = get("output.path")) cfg.output_path = *v;
  if (auto v = get("sweep.penalties")) {
    for (const auto& item : split_list(*v)) {
      cfg.sweep_penalties.push_back(parse_number<double>("sweep.penalties", item));
    }
  }
  cfg.validate();
  try {
    cfg.newton.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace dgsl
