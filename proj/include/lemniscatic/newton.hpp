#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"

namespace lemniscatic {

/// Iterate z = (w_1..w_{ell n}, a_1..a_ell) of the nonlinear boundary system.
struct NewtonState {
  ComplexGrid w;
  std::vector<Complex> a;
  int k = 0;
  std::vector<double> step_norm_history;
  std::vector<double> cond_d_history;
  std::vector<double> cond_schur_history;
};

/// `circles`: small circles w^0 around scaled centroids a^0.
/// `identity`: w^0 = eta shifted onto a^0 (a^0 = centroid unless overridden).
enum class StartMode { circles, identity };

struct StartOptions {
  StartMode mode = StartMode::circles;
  double s0 = 1.1;     ///< a_j^0 = s0 * centroid_j
  double delta = 0.1;  ///< starting circle radius as a fraction of the nearest-center distance
  std::vector<Complex> centers;  ///< manual a^0 override (empty: heuristic)
  /// Starting circle w^0 = a^0 + rho u(t) with u(t) the direction of eta(t)
  /// seen from the centroid, so w^0 and eta start in phase. When false (or when
  /// the centroid is not inside the curve) u(t) = e^{-it}.
  bool follow_boundary = true;
};

/// Which bottom-right block the Jacobian uses.
///
/// `exact` is the true derivative of the moment rows with respect to a_k:
/// -1 - (1/(n i)) sum_q eta_dot_q / (w_q - a_k), which tends to zero at the
/// solution. `simplified` replaces it by -1 (the -I_ell block), giving a
/// quasi-Newton iteration.
enum class JacobianModel { exact, simplified };

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  JacobianModel model = JacobianModel::exact;
  StartOptions start;
  bool branch_retry = true;     ///< on failure retry circles with delta/2 and s0 pushed outward
  bool identity_fallback = true;  ///< then, as a last resort, the identity start
  double divergence_factor = 1e6;
};

struct LemniscaticDomain {
  std::vector<Complex> a;
  std::vector<double> m;
  double tau = 1.0;
};

struct MapDiagnostics {
  bool converged = false;
  int newton_iterations = 0;
  std::vector<double> step_norm_history;
  std::vector<double> cond_d_history;
  std::vector<double> cond_schur_history;
  double residual_inf = 0.0;            ///< ||F(z)||_inf at the returned state
  double lemniscate_residual = 0.0;     ///< max_i |prod_j |w_i - a_j|^{m_j} - tau| at the nodes
  double lemniscate_residual_offgrid = 0.0;  ///< same, at midpoints via trigonometric interpolation of w
  double moment_residual = 0.0;         ///< max over the last ell entries of |F|
  bool winding_ok = false;
  /// Consecutive node pairs where a principal Arg((w - a_j)/(eta - alpha_j)) jumps by more than pi.
  /// Nonzero means the iterate solves a branch-shifted system, not the map.
  std::size_t branch_jumps = 0;
  bool branch_retry_used = false;
  std::string start_used = "circles";  ///< circles, circles-retry or identity
  int iterations_all_attempts = 0;     ///< including abandoned starts
  bool corner_domain = false;
  // carried over from the integral equation stage
  std::vector<int> gmres_iterations;
  std::vector<double> gmres_relres;
  std::vector<bool> gmres_fallback;
};

struct MapSolution {
  ComplexGrid boundary_w;
  LemniscaticDomain domain;
  MapDiagnostics diagnostics;
};

/// Raised when Newton does not converge; carries the last iterate and its diagnostics.
class NewtonError : public Error {
 public:
  NewtonError(const std::string& what, MapSolution partial)
      : Error(Stage::newton, what), partial_(std::move(partial)) {}
  const MapSolution& partial() const noexcept { return partial_; }

 private:
  MapSolution partial_;
};

NewtonState initial_guess(const Discretization& disc, const StartOptions& options = {});

/// F(z): ell n boundary equations followed by ell moment equations.
ComplexGrid residual_F(const NewtonState& state, const BoundaryRHS& rhs, const CanonicalParameters& params,
                       const Discretization& disc);

struct LinearizedInfo {
  double cond_d = 0.0;
  double cond_schur = 0.0;
  double min_abs_d = 0.0;
};

/// Solve F'(z) v = F via the ell x ell Schur complement, without forming D, A1 or A2.
ComplexGrid solve_linearized(const NewtonState& state, std::span<const Complex> f, const CanonicalParameters& params,
                             const Discretization& disc, JacobianModel model = JacobianModel::exact,
                             LinearizedInfo* info = nullptr);

/// Apply F'(z) to a vector (matrix-free); used for derivative checks.
ComplexGrid apply_jacobian(const NewtonState& state, std::span<const Complex> v, const CanonicalParameters& params,
                           const Discretization& disc, JacobianModel model = JacobianModel::exact);

MapSolution newton_solve(const Discretization& disc, const BoundaryRHS& rhs, const CanonicalParameters& params,
                         const NewtonOptions& options = {});

/// Newton from a given state (no retry).
MapSolution newton_iterate(NewtonState state, const Discretization& disc, const BoundaryRHS& rhs,
                           const CanonicalParameters& params, const NewtonOptions& options);

double lemniscate_residual(std::span<const Complex> w, const LemniscaticDomain& domain);
double lemniscate_residual_offgrid(const Discretization& disc, std::span<const Complex> w,
                                   const LemniscaticDomain& domain);

std::size_t count_branch_jumps(const Discretization& disc, std::span<const Complex> w, std::span<const Complex> a,
                               std::span<const Complex> alpha);

/// Boundary values of component j wind -1 around a_j and 0 around every other a_k.
bool check_winding(const Discretization& disc, std::span<const Complex> w, std::span<const Complex> a);

}  // namespace lemniscatic
