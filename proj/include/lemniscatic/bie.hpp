#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"
#include "lemniscatic/gmres.hpp"
#include "lemniscatic/kernels.hpp"

namespace lemniscatic {

struct BieOptions {
  double tol = 1e-14;
  int max_iter = 100;
};

/// Solution (mu_j, h_j) of one boundary integral equation.
struct ComponentSolution {
  GridFunction mu;
  GridFunction h_pointwise;  ///< [M mu - (I-N) gamma] / 2 at every node
  PiecewiseConstant h;       ///< per-component node averages h_{k,j}
  double h_spread = 0.0;     ///< max deviation of h_pointwise from its component mean
  int gmres_iters = 0;
  double gmres_relres = 0.0;
  double gmres_true_relres = 0.0;
  bool used_fallback = false;
};

struct CanonicalParameters {
  std::vector<double> m;
  double log_tau = 0.0;
  double tau = 1.0;
};

/// Right-hand side p_i = log tau + gamma(t_i) + i mu(t_i) of the nonlinear stage.
struct BoundaryRHS {
  ComplexGrid p;
  GridFunction gamma;
  GridFunction mu;
  std::vector<Complex> alpha;
};

/// -log|eta(t_i) - alpha| over all nodes. alpha must lie strictly inside component j.
GridFunction gamma_j(const Discretization& disc, std::size_t j, Complex alpha);

/// Solve (I - N) mu = -M gamma by GMRES (dense LU fallback) and form h.
ComponentSolution solve_component(const Discretization& disc, std::span<const double> gamma,
                                  const BieOptions& options = {});

/// Solve the (ell+1) x (ell+1) system for m and log tau. H(k, j) = h_{k,j}.
CanonicalParameters solve_parameters(const Eigen::MatrixXd& h);

BoundaryRHS assemble_rhs(const Discretization& disc, std::span<const Complex> alphas,
                         std::span<const ComponentSolution> components, const CanonicalParameters& params);

/// Default auxiliary points: component centroids. Overrides, when given, are validated instead.
std::vector<Complex> auxiliary_points(const Discretization& disc,
                                      const std::optional<std::vector<Complex>>& overrides = std::nullopt);

struct BieSolution {
  std::vector<Complex> alphas;
  std::vector<ComponentSolution> components;
  Eigen::MatrixXd h;
  CanonicalParameters params;
  BoundaryRHS rhs;

  int total_gmres_iterations() const;
};

/// gamma_j -> (mu_j, h_j) for every j -> (m, log tau) -> p.
BieSolution solve_bie(const Discretization& disc, const std::optional<std::vector<Complex>>& alphas = std::nullopt,
                      const BieOptions& options = {});

}  // namespace lemniscatic
