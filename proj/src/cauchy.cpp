#include "lemniscatic/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lemniscatic {

const char* status_name(PointStatus status) {
  switch (status) {
    case PointStatus::ok: return "ok";
    case PointStatus::near_boundary: return "near-boundary";
    case PointStatus::outside_domain: return "outside-domain";
  }
  return "unknown";
}

double node_spacing(const Discretization& disc) {
  double m = 0.0;
  for (const Complex& d : disc.eta_dot) m = std::max(m, std::abs(d));
  return disc.weight() * m;
}

Complex cauchy_exterior(const Discretization& disc, std::span<const Complex> g, Complex z, bool normalized) {
  if (g.size() != disc.size()) throw Error(Stage::cauchy, "boundary data has wrong length");
  Complex num{};
  Complex den{};
  for (std::size_t q = 0; q < disc.size(); ++q) {
    const Complex c = disc.eta_dot[q] / (disc.eta[q] - z);
    num += g[q] * c;
    den += c;
  }
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);
  num *= scale;
  if (!normalized) return num;
  return num / (1.0 + scale * den);
}

namespace {

PointStatus classify(const Discretization& disc, Complex z, double h, double& distance) {
  distance = std::numeric_limits<double>::infinity();
  for (const Complex& e : disc.eta) distance = std::min(distance, std::abs(e - z));
  for (std::size_t j = 0; j < disc.ell; ++j) {
    try {
      if (winding_number(disc.component_eta(j), z) != 0) return PointStatus::outside_domain;
    } catch (const Error&) {
      return PointStatus::outside_domain;
    }
  }
  return distance < h ? PointStatus::near_boundary : PointStatus::ok;
}

}  // namespace

std::vector<PointValue> eval_exterior(const Discretization& disc, std::span<const Complex> g,
                                      const EvaluationRequest& request) {
  if (g.size() != disc.size()) throw Error(Stage::cauchy, "boundary data has wrong length");
  const double h = node_spacing(disc);
  std::vector<PointValue> out(request.points.size());
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < np; ++ii) {
    PointValue& pv = out[static_cast<std::size_t>(ii)];
    pv.z = request.points[static_cast<std::size_t>(ii)];
    pv.status = classify(disc, pv.z, h, pv.distance);
    if (pv.status == PointStatus::outside_domain) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      pv.value = Complex(nan, nan);
      continue;
    }
    switch (request.policy) {
      case NearBoundaryPolicy::plain: pv.normalized = false; break;
      case NearBoundaryPolicy::normalized: pv.normalized = true; break;
      case NearBoundaryPolicy::automatic: pv.normalized = pv.distance < 5.0 * h; break;
    }
    pv.value = cauchy_exterior(disc, g, pv.z, pv.normalized);
  }
  return out;
}

std::vector<PointValue> eval_map(const MapSolution& solution, const Discretization& disc,
                                 const EvaluationRequest& request) {
  if (solution.boundary_w.size() != disc.size()) throw Error(Stage::cauchy, "solution does not match discretization");
  ComplexGrid g(disc.size());
  for (std::size_t q = 0; q < g.size(); ++q) g[q] = solution.boundary_w[q] - disc.eta[q];
  std::vector<PointValue> out = eval_exterior(disc, g, request);
  for (PointValue& pv : out)
    if (pv.status != PointStatus::outside_domain) pv.value += pv.z;
  return out;
}

}  // namespace lemniscatic
