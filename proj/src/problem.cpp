#include "dgsl/problem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dgsl/errors.hpp"

namespace dgsl {

using std::numbers::pi;

Problem sine_problem() {
  ExactSolution exact;
  exact.value = [](Vec2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  exact.gradient = [](Vec2 p) {
    return Vec2{pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  exact.laplacian = [](Vec2 p) {
    return -2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y);
  };

  Problem p;
  p.name = "sine";
  p.nonlinearity = [](double u) { return u * u * u; };
  p.nonlinearity_derivative = [](double u) { return 3.0 * u * u; };
  p.source = [](Vec2 x) {
    const double s = std::sin(pi * x.x) * std::sin(pi * x.y);
    return 2.0 * pi * pi * s + s * s * s;
  };
  p.exact = std::move(exact);
  return p;
}

std::vector<std::string> problem_names() { return {"sine"}; }

Problem make_problem(const std::string& name) {
  if (name == "sine") return sine_problem();
  throw ConfigError("unknown problem '" + name + "'");
}

namespace {

Vec2 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x = unit(rng);
  return {x, unit(rng)};
}

}  // namespace

double manufactured_consistency_defect(const Problem& problem, int samples, std::uint64_t seed) {
  if (!problem.exact) throw InvalidArgument("problem '" + problem.name + "' has no exact solution");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec2 x = random_point(rng);
    const double u = problem.exact->value(x);
    const double g = -problem.exact->laplacian(x) + problem.nonlinearity(u);
    worst = std::max(worst, std::abs(problem.source(x) - g));
  }
  return worst;
}

double gradient_consistency_defect(const ExactSolution& exact, int samples, std::uint64_t seed) {
  constexpr double h = 1e-5;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec2 x = random_point(rng);
    const Vec2 g = exact.gradient(x);
    const double gx = (exact.value({x.x + h, x.y}) - exact.value({x.x - h, x.y})) / (2 * h);
    const double gy = (exact.value({x.x, x.y + h}) - exact.value({x.x, x.y - h})) / (2 * h);
    worst = std::max({worst, std::abs(g.x - gx), std::abs(g.y - gy)});
  }
  return worst;
}

std::vector<std::string> monotonicity_warnings(const Problem& problem, double u_min, double u_max,
                                               int samples) {
  std::vector<std::string> out;
  for (int s = 0; s < samples; ++s) {
    const double u = samples > 1 ? u_min + (u_max - u_min) * s / (samples - 1) : u_min;
    const double d = problem.nonlinearity_derivative(u);
    if (d < 0.0) {
      std::ostringstream msg;
      msg << "N'(" << u << ") = " << d << " < 0: f_u > 0 violates the monotonicity assumption";
      out.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace dgsl
