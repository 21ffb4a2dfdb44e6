#include "lemniscatic/bie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lemniscatic/linalg.hpp"

namespace lemniscatic {

GridFunction gamma_j(const Discretization& disc, std::size_t j, Complex alpha) {
  if (j >= disc.ell) throw Error(Stage::bie, "component index out of range");
  int wn = 0;
  try {
    wn = winding_number(disc.component_eta(j), alpha);
  } catch (const Error&) {
    throw Error(Stage::bie, "auxiliary point " + std::to_string(j) + " lies on its boundary curve");
  }
  if (wn != -1)
    throw Error(Stage::bie, "auxiliary point " + std::to_string(j) +
                                " is not inside its boundary curve; supply alphas explicitly");
  GridFunction g(disc.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::abs(disc.eta[i] - alpha);
    if (!(d > 1e-14)) throw Error(Stage::bie, "auxiliary point coincides with a node");
    g[i] = -std::log(d);
  }
  return g;
}

ComponentSolution solve_component(const Discretization& disc, std::span<const double> gamma,
                                  const BieOptions& options) {
  if (!(options.tol > 0.0 && options.tol <= 1e-6)) throw Error(Stage::bie, "GMRES tolerance must lie in (0, 1e-6]");
  if (gamma.size() != disc.size()) throw Error(Stage::bie, "gamma has wrong length");

  ComponentSolution sol;
  GridFunction rhs = kernels::apply_M(disc, gamma);
  for (double& v : rhs) v = -v;

  const LinearOperator op = [&disc](std::span<const double> x, std::span<double> y) {
    const GridFunction r = kernels::apply_I_minus_N(disc, x);
    std::copy(r.begin(), r.end(), y.begin());
  };
  GmresResult gm = gmres(op, rhs, GmresOptions{options.tol, options.max_iter});
  sol.gmres_iters = gm.iterations;
  sol.gmres_relres = gm.relres;
  sol.gmres_true_relres = gm.true_relres;
  if (gm.converged) {
    sol.mu = std::move(gm.x);
  } else {
    sol.used_fallback = true;
    const Eigen::MatrixXd a = kernels::assemble_I_minus_N(disc);
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd x = lu.solve(b);
    const double bn = b.norm();
    const double rel = bn > 0.0 ? (a * x - b).norm() / bn : 0.0;
    if (!std::isfinite(rel) || rel > 1e-8) throw Error(Stage::bie, "dense fallback solve failed");
    sol.mu.assign(x.data(), x.data() + x.size());
    sol.gmres_true_relres = rel;
  }

  const GridFunction m_mu = kernels::apply_M(disc, sol.mu);
  const GridFunction imn_gamma = kernels::apply_I_minus_N(disc, gamma);
  sol.h_pointwise.resize(disc.size());
  for (std::size_t i = 0; i < disc.size(); ++i) sol.h_pointwise[i] = 0.5 * (m_mu[i] - imn_gamma[i]);

  sol.h.values.assign(disc.ell, 0.0);
  for (std::size_t k = 0; k < disc.ell; ++k) {
    double s = 0.0;
    for (std::size_t p = 0; p < disc.n; ++p) s += sol.h_pointwise[k * disc.n + p];
    sol.h.values[k] = s / static_cast<double>(disc.n);
  }
  for (std::size_t i = 0; i < disc.size(); ++i)
    sol.h_spread = std::max(sol.h_spread, std::abs(sol.h_pointwise[i] - sol.h.values[disc.component_of[i]]));
  return sol;
}

CanonicalParameters solve_parameters(const Eigen::MatrixXd& h) {
  const Eigen::Index ell = h.rows();
  if (ell == 0 || h.cols() != ell) throw Error(Stage::parameters, "h matrix must be square and nonempty");
  if (!h.allFinite()) throw Error(Stage::parameters, "h matrix has non-finite entries");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ell + 1, ell + 1);
  a.topLeftCorner(ell, ell) = h;
  a.topRightCorner(ell, 1).setConstant(-1.0);
  a.bottomLeftCorner(1, ell).setConstant(1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ell + 1);
  rhs(ell) = 1.0;
  const auto x = solve_small<double>(a, rhs, 1e-14);
  if (!x)
    throw Error(Stage::parameters,
                "parameter system is numerically singular; it is nonsingular in exact arithmetic, "
                "so the boundary integral solves upstream are unreliable");
  CanonicalParameters out;
  out.m.assign(x->data(), x->data() + ell);
  out.log_tau = (*x)(ell);
  out.tau = std::exp(out.log_tau);
  return out;
}

BoundaryRHS assemble_rhs(const Discretization& disc, std::span<const Complex> alphas,
                         std::span<const ComponentSolution> components, const CanonicalParameters& params) {
  if (alphas.size() != disc.ell || components.size() != disc.ell || params.m.size() != disc.ell)
    throw Error(Stage::bie, "assemble_rhs: component count mismatch");
  BoundaryRHS rhs;
  rhs.alpha.assign(alphas.begin(), alphas.end());
  rhs.gamma.assign(disc.size(), 0.0);
  rhs.mu.assign(disc.size(), 0.0);
  for (std::size_t j = 0; j < disc.ell; ++j) {
    const double mj = params.m[j];
    for (std::size_t i = 0; i < disc.size(); ++i) {
      rhs.gamma[i] -= mj * std::log(std::abs(disc.eta[i] - alphas[j]));
      rhs.mu[i] += mj * components[j].mu.at(i);
    }
  }
  rhs.p.resize(disc.size());
  for (std::size_t i = 0; i < disc.size(); ++i) rhs.p[i] = Complex(params.log_tau + rhs.gamma[i], rhs.mu[i]);
  return rhs;
}

std::vector<Complex> auxiliary_points(const Discretization& disc, const std::optional<std::vector<Complex>>& overrides) {
  std::vector<Complex> alphas;
  if (overrides) {
    if (overrides->size() != disc.ell) throw Error(Stage::input, "alphas must match the number of curves");
    alphas = *overrides;
  } else {
    for (std::size_t j = 0; j < disc.ell; ++j) alphas.push_back(centroid(disc, j));
  }
  for (std::size_t j = 0; j < disc.ell; ++j) {
    int wn = 0;
    try {
      wn = winding_number(disc.component_eta(j), alphas[j]);
    } catch (const Error&) {
      wn = 0;
    }
    if (wn != -1)
      throw Error(Stage::bie, "auxiliary point for curve " + std::to_string(j) + " is not inside the curve" +
                                  (overrides ? "" : " (centroid outside a non-starlike curve); supply alphas"));
  }
  return alphas;
}

int BieSolution::total_gmres_iterations() const {
  int s = 0;
  for (const auto& c : components) s += c.gmres_iters;
  return s;
}

BieSolution solve_bie(const Discretization& disc, const std::optional<std::vector<Complex>>& alphas,
                      const BieOptions& options) {
  BieSolution out;
  out.alphas = auxiliary_points(disc, alphas);
  out.h.resize(static_cast<Eigen::Index>(disc.ell), static_cast<Eigen::Index>(disc.ell));
  for (std::size_t j = 0; j < disc.ell; ++j) {
    const GridFunction g = gamma_j(disc, j, out.alphas[j]);
    out.components.push_back(solve_component(disc, g, options));
    for (std::size_t k = 0; k < disc.ell; ++k) out.h(k, j) = out.components.back().h.values[k];
  }
  out.params = solve_parameters(out.h);
  out.rhs = assemble_rhs(disc, out.alphas, out.components, out.params);
  return out;
}

}  // namespace lemniscatic
