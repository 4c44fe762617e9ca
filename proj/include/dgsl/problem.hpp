#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dgsl/geometry.hpp"

namespace dgsl {

/// Smooth reference solution with analytic derivatives.
struct ExactSolution {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  std::function<double(Vec2)> laplacian;
};

/// -Laplace(u) + N(u) = g in the unit square, u = 0 on the boundary.
/// In the form -Laplace(u) = f(x, u) this is f(x, u) = g(x) - N(u).
struct Problem {
  std::string name;
  std::function<double(double)> nonlinearity;             // N(u)
  std::function<double(double)> nonlinearity_derivative;  // N'(u)
  std::function<double(Vec2)> source;                     // g(x)
  std::optional<ExactSolution> exact;

  double f(Vec2 x, double u) const { return source(x) - nonlinearity(u); }
  double f_u(double u) const { return -nonlinearity_derivative(u); }
};

/// u = sin(pi x) sin(pi y), N(u) = u^3, g = 2 pi^2 u + u^3.
Problem sine_problem();

/// Looks up a registered problem; throws ConfigError for unknown names.
Problem make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Max over random points of |g - (-Laplace(u) + N(u))|; the problem must have an exact solution.
double manufactured_consistency_defect(const Problem& problem, int samples = 200,
                                       std::uint64_t seed = 7);

/// Max over random points of |grad u - central difference of u| with step 1e-5.
double gradient_consistency_defect(const ExactSolution& exact, int samples = 200,
                                   std::uint64_t seed = 11);

/// Samples N'(u) on [u_min, u_max]; returns one message per sample with N'(u) < 0,
/// i.e. where f_u > 0 and the Jacobian may lose coercivity.
std::vector<std::string> monotonicity_warnings(const Problem& problem, double u_min, double u_max,
                                               int samples = 101);

}  // namespace dgsl
