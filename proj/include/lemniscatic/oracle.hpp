#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"
#include "lemniscatic/newton.hpp"

namespace lemniscatic::oracle {

struct CapacityResult {
  double capacity = 0.0;
  double robin_constant = 0.0;  ///< V with sum_q log|eta - eta_q| density_q weight = V on the boundary
  GridFunction density;         ///< equilibrium density with respect to dt
  double mass = 0.0;
};

/// Logarithmic capacity from the first-kind equation
///   int log|eta(s) - zeta| dmu(zeta) = V,  mu(Gamma) = 1,  capacity = e^V,
/// with Kress product weights for log|2 sin((s-t)/2)| on each component.
/// Smooth boundaries only.
CapacityResult capacity_logkernel(const Discretization& disc);

/// Product-integration weights R_q(s_p) = int log|2 sin((s_p - t)/2)| L_q(t) dt
/// for the trigonometric Lagrange basis on n equispaced nodes, indexed by (p - q) mod n.
std::vector<double> log_sine_weights(std::size_t n);

/// Full (ell n + ell) x (ell n + ell) Jacobian F'(z), entry by entry. Size cap 200.
Eigen::MatrixXcd dense_jacobian(const NewtonState& state, const CanonicalParameters& params,
                                const Discretization& disc, JacobianModel model = JacobianModel::exact);

struct IdentityFixture {
  Discretization disc;
  MapSolution solution;
  NewtonState state;
  CanonicalParameters params;
  BoundaryRHS rhs;
};

/// Exterior of the disk |z - c| > r: Phi is the identity, a = c, m = (1), tau = r.
IdentityFixture reference_identity_domain(double r, Complex c, std::size_t n = 64);

}  // namespace lemniscatic::oracle
