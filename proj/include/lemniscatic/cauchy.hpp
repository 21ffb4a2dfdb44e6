#pragma once

#include <span>
#include <vector>

#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"
#include "lemniscatic/newton.hpp"

namespace lemniscatic {

enum class NearBoundaryPolicy { plain, normalized, automatic };

enum class PointStatus { ok, near_boundary, outside_domain };

const char* status_name(PointStatus status);

struct EvaluationRequest {
  std::vector<Complex> points;
  NearBoundaryPolicy policy = NearBoundaryPolicy::automatic;
};

struct PointValue {
  Complex z;
  Complex value;  ///< NaN when outside_domain
  PointStatus status = PointStatus::ok;
  bool normalized = false;
  double distance = 0.0;  ///< distance to the nearest node
};

/// Node spacing h = 2pi max|eta_dot| / n.
double node_spacing(const Discretization& disc);

/// Trapezoidal Cauchy integral of boundary data g of a function analytic in K
/// with g(inf) = 0. The normalized form divides by 1 + (discrete integral of 1/(eta - z)).
Complex cauchy_exterior(const Discretization& disc, std::span<const Complex> g, Complex z, bool normalized);

/// Phi(z) = z + Cauchy integral of w - eta. Points inside a hole or on the
/// boundary get outside_domain; points closer than h to a node get near_boundary.
std::vector<PointValue> eval_map(const MapSolution& solution, const Discretization& disc,
                                 const EvaluationRequest& request);

/// Cauchy evaluation of arbitrary boundary data g, with the same point checks and policy.
std::vector<PointValue> eval_exterior(const Discretization& disc, std::span<const Complex> g,
                                      const EvaluationRequest& request);

}  // namespace lemniscatic
