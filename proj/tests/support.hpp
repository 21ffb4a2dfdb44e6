#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/geometry.hpp"
#include "lemniscatic/problem.hpp"

namespace lemniscatic::test {

inline std::filesystem::path problem_path(const std::string& name) {
  return std::filesystem::path(LEMNISCATIC_PROBLEM_DIR) / (name + ".json");
}

inline ProblemSpec problem(const std::string& name) { return load_problem(problem_path(name)); }

inline Discretization discretize_problem(const std::string& name, std::size_t n) {
  ProblemSpec spec = problem(name);
  return discretize(build_curves(spec), n);
}

inline Discretization circle(std::size_t n, double r = 1.0, Complex c = {}) {
  return discretize({make_curve(CircleParams{c, r})}, n);
}

inline Discretization two_disks(std::size_t n, double r = 0.5, const Affine& map = {}) {
  return discretize({make_curve(CircleParams{{-1.0, 0.0}, r}, map), make_curve(CircleParams{{1.0, 0.0}, r}, map)},
                    n);
}

inline Discretization ellipse(std::size_t n, double a = 2.0, double b = 1.0) {
  return discretize({make_curve(EllipseParams{{}, a, b, 0.0})}, n);
}

/// The r_4 curve of the seven-curve layout, alone and centered at the origin.
inline Discretization r4_curve(std::size_t n) {
  TrigRadialParams p;
  p.constant = 0.0;
  p.terms = {RadialTerm{1.0, 1.0, 0.0, 2, 2, 0, 0}, RadialTerm{1.0, 0.0, 1.0, 0, 0, 2, 2}};
  return discretize({make_curve(p)}, n);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (Complex x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::vector<double> random_vector(std::size_t len, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(len);
  for (double& x : v) x = u(rng);
  return v;
}

inline ComplexGrid random_complex(std::size_t len, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  ComplexGrid v(len);
  for (Complex& x : v) x = Complex(u(rng), u(rng));
  return v;
}

}  // namespace lemniscatic::test
