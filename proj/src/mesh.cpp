#include "dgsl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dgsl/errors.hpp"

namespace dgsl {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

// Uniform in [0,1) from the top 53 bits; independent of the standard library's
// distribution implementation so meshes are reproducible across toolchains.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
                 std::optional<double> nominal_h)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      nominal_h_(nominal_h) {
  if (triangles_.empty()) throw InvalidArgument("mesh has no triangles");
  const int nv = num_vertices();
  areas_.resize(triangles_.size());
  diameters_.resize(triangles_.size());

  std::set<std::array<int, 3>> seen;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw IndexOutOfRange("triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(v));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw DegenerateElement("triangle " + std::to_string(t) + " repeats a vertex");
    }
    auto key = tri;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      throw NonConformingMesh("triangle " + std::to_string(t) + " is listed twice");
    }

    double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (a < 0.0) {
      std::swap(tri[1], tri[2]);
      a = -a;
    }
    if (!(a > 0.0)) throw DegenerateElement("triangle " + std::to_string(t) + " has zero area");
    areas_[t] = a;

    double d = 0.0;
    for (int k = 0; k < 3; ++k) {
      d = std::max(d, norm(vertices_[tri[(k + 1) % 3]] - vertices_[tri[k]]));
    }
    diameters_[t] = d;
    h_max_ = std::max(h_max_, d);
  }
  build_edges();
}

void TriMesh::build_edges() {
  std::map<std::pair<int, int>, int> index;
  element_edges_.assign(triangles_.size(), {-1, -1, -1});

  for (int t = 0; t < num_elements(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        Edge e;
        e.endpoints = {key.first, key.second};
        const Vec2 d = vertices_[b] - vertices_[a];
        e.length = norm(d);
        e.plus = {t, k};
        // (a, b) runs counter-clockwise around t, so the outward normal is d rotated by -90 degrees.
        e.normal = Vec2{d.y, -d.x} * (1.0 / e.length);
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.minus) {
          throw NonConformingMesh("edge (" + std::to_string(key.first) + ", " +
                                  std::to_string(key.second) + ") shared by more than two triangles");
        }
        // Both sides of a conforming interior edge traverse it in opposite directions.
        const auto& other = triangles_[e.plus.element];
        const int pa = other[(e.plus.local_edge + 1) % 3];
        if (pa == a) {
          throw NonConformingMesh("triangles " + std::to_string(e.plus.element) + " and " +
                                  std::to_string(t) + " overlap across an edge");
        }
        e.minus = EdgeSide{t, k};
      }
      element_edges_[t][k] = it->second;
    }
  }
  num_boundary_edges_ = static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_boundary(); }));
}

Vec2 TriMesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (1.0 / 3.0) * (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]);
}

double TriMesh::h_min_element() const {
  return *std::min_element(diameters_.begin(), diameters_.end());
}

double TriMesh::total_area() const {
  // Kahan-compensated so the area check is not dominated by summation error.
  double sum = 0.0;
  double c = 0.0;
  for (double a : areas_) {
    const double y = a - c;
    const double s = sum + y;
    c = (s - sum) - y;
    sum = s;
  }
  return sum;
}

TriMesh build_structured(int n) {
  if (n < 1) throw InvalidArgument("structured mesh needs n >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles), 1.0 / n);
}

TriMesh build_perturbed(int n, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude <= 0.3)) {
    throw InvalidArgument("perturbation amplitude must lie in [0, 0.3]");
  }
  const TriMesh base = build_structured(n);
  std::vector<Vec2> vertices = base.vertices();
  std::vector<Triangle> triangles = base.triangles();

  std::mt19937_64 rng(seed);
  const double scale = amplitude / n;
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      Vec2& p = vertices[j * (n + 1) + i];
      p.x += scale * (2.0 * unit_uniform(rng) - 1.0);
      p.y += scale * (2.0 * unit_uniform(rng) - 1.0);
    }
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    if (!(signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) > 0.0)) {
      throw PerturbationFoldover("triangle " + std::to_string(t) +
                                 " folded over; reduce the perturbation amplitude");
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh import_mesh(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  const auto next_line = [&](std::istringstream& fields) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  };
  const auto expect_end = [&](std::istringstream& fields) {
    std::string extra;
    if (fields >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line_no);
  };

  std::istringstream fields;
  if (!next_line(fields)) throw ParseError("missing header line 'nv nt'", line_no);
  long nv = 0;
  long nt = 0;
  if (!(fields >> nv >> nt) || nv < 3 || nt < 1) {
    throw ParseError("header must be 'nv nt' with nv >= 3 and nt >= 1", line_no);
  }
  expect_end(fields);

  std::vector<Vec2> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices) {
    if (!next_line(fields)) throw ParseError("file ends before all vertices were read", line_no);
    if (!(fields >> p.x >> p.y)) throw ParseError("expected 'x y'", line_no);
    expect_end(fields);
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& tri : triangles) {
    if (!next_line(fields)) throw ParseError("file ends before all triangles were read", line_no);
    long idx[3];
    if (!(fields >> idx[0] >> idx[1] >> idx[2])) throw ParseError("expected 'i j k'", line_no);
    expect_end(fields);
    for (int k = 0; k < 3; ++k) {
      if (idx[k] < 0 || idx[k] >= nv) {
        throw ParseError("vertex index " + std::to_string(idx[k]) + " out of range", line_no);
      }
      tri[k] = static_cast<int>(idx[k]);
    }
  }
  if (next_line(fields)) throw ParseError("unexpected content after the last triangle", line_no);
  return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_mesh(buf.str());
}

std::string export_mesh(const TriMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

}  // namespace dgsl
