#include "lemniscatic/newton.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/FFT>

#include "lemniscatic/linalg.hpp"

namespace lemniscatic {

namespace {

double inf_norm(std::span<const Complex> v) {
  double m = 0.0;
  for (const Complex& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Cauchy matrix entries 1/(w_r - a_s) and the diagonal d_r = sum_j m_j / (w_r - a_j).
struct CauchyData {
  std::vector<Complex> c;  // row-major, ell n x ell
  std::vector<Complex> d;
};

CauchyData cauchy_data(const NewtonState& state, const CanonicalParameters& params) {
  const std::size_t total = state.w.size();
  const std::size_t ell = state.a.size();
  CauchyData cd;
  cd.c.resize(total * ell);
  cd.d.resize(total);
  const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nt; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    Complex d{};
    for (std::size_t j = 0; j < ell; ++j) {
      const Complex cij = 1.0 / (state.w[i] - state.a[j]);
      cd.c[i * ell + j] = cij;
      d += params.m[j] * cij;
    }
    cd.d[i] = d;
  }
  return cd;
}

// Bottom-right diagonal of F'(z).
std::vector<Complex> moment_diagonal(const NewtonState& state, const CauchyData& cd, const Discretization& disc,
                                     JacobianModel model) {
  const std::size_t ell = state.a.size();
  std::vector<Complex> e(ell, Complex(-1.0, 0.0));
  if (model == JacobianModel::simplified) return e;
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);
  for (std::size_t k = 0; k < ell; ++k) {
    Complex s{};
    for (std::size_t q = 0; q < disc.size(); ++q) s += disc.eta_dot[q] * cd.c[q * ell + k];
    e[k] -= scale * s;
  }
  return e;
}

void check_shapes(const NewtonState& state, const CanonicalParameters& params, const Discretization& disc) {
  if (state.w.size() != disc.size() || state.a.size() != disc.ell || params.m.size() != disc.ell)
    throw Error(Stage::newton, "state does not match the discretization");
}

}  // namespace

NewtonState initial_guess(const Discretization& disc, const StartOptions& options) {
  if (!(options.s0 > 1.0)) throw Error(Stage::newton, "s0 must be > 1");
  if (!(options.delta > 0.0 && options.delta <= 0.5)) throw Error(Stage::newton, "delta must lie in (0, 0.5]");
  NewtonState st;
  const std::size_t ell = disc.ell;
  if (options.mode == StartMode::identity) {
    if (!options.centers.empty() && options.centers.size() != ell)
      throw Error(Stage::input, "start centers must match the number of curves");
    st.w.resize(disc.size());
    for (std::size_t j = 0; j < ell; ++j) {
      const Complex c = centroid(disc, j);
      st.a.push_back(options.centers.empty() ? c : options.centers[j]);
      for (std::size_t i = disc.begin_of(j); i < disc.begin_of(j) + disc.n; ++i) st.w[i] = disc.eta[i] - c + st.a[j];
    }
    return st;
  }
  if (!options.centers.empty()) {
    if (options.centers.size() != ell) throw Error(Stage::input, "start centers must match the number of curves");
    st.a = options.centers;
  } else {
    for (std::size_t j = 0; j < ell; ++j) st.a.push_back(options.s0 * centroid(disc, j));
  }

  double scale = 0.0;
  for (std::size_t j = 0; j < ell; ++j) scale = std::max(scale, diameter(disc.component_eta(j)));
  for (const Complex& a : st.a) scale = std::max(scale, std::abs(a));

  std::vector<double> rho(ell);
  if (ell == 1) {
    rho[0] = options.delta * diameter(disc.component_eta(0));
  } else {
    for (std::size_t j = 0; j < ell; ++j) {
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ell; ++k)
        if (k != j) dmin = std::min(dmin, std::abs(st.a[j] - st.a[k]));
      if (!(dmin > 1e-10 * scale))
        throw Error(Stage::newton, "initial centers coincide; set start.centers in the problem spec");
      rho[j] = options.delta * dmin;
    }
  }

  st.w.resize(disc.size());
  for (std::size_t j = 0; j < ell; ++j) {
    const Complex c = centroid(disc, j);
    bool follow = options.follow_boundary;
    if (follow) {
      try {
        follow = winding_number(disc.component_eta(j), c) == -1;
      } catch (const Error&) {
        follow = false;
      }
    }
    for (std::size_t i = disc.begin_of(j); i < disc.begin_of(j) + disc.n; ++i) {
      const Complex u = follow ? (disc.eta[i] - c) / std::abs(disc.eta[i] - c) : std::exp(-kI * disc.nodes[i]);
      st.w[i] = st.a[j] + rho[j] * u;
    }
  }
  return st;
}

ComplexGrid residual_F(const NewtonState& state, const BoundaryRHS& rhs, const CanonicalParameters& params,
                       const Discretization& disc) {
  const CanonicalParameters& pr = params;
  check_shapes(state, pr, disc);
  if (rhs.p.size() != disc.size() || rhs.alpha.size() != disc.ell) throw Error(Stage::newton, "rhs shape mismatch");
  const std::size_t ell = disc.ell;
  const std::size_t total = disc.size();
  ComplexGrid f(total + ell);
  std::atomic<bool> singular{false};

  const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nt; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    Complex s{};
    for (std::size_t j = 0; j < ell; ++j) {
      const Complex num = state.w[i] - state.a[j];
      const Complex den = disc.eta[i] - rhs.alpha[j];
      if (num == Complex{} || den == Complex{}) singular = true;
      s += pr.m[j] * std::log(num / den);
    }
    f[i] = s - rhs.p[i];
  }

  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);
  for (std::size_t k = 0; k < ell; ++k) {
    Complex s{};
    for (std::size_t q = 0; q < total; ++q) {
      const Complex num = state.w[q] - state.a[k];
      const Complex den = disc.eta[q] - rhs.alpha[k];
      if (num == Complex{} || den == Complex{}) singular = true;
      s += std::log(num / den) * disc.eta_dot[q];
    }
    f[total + k] = scale * s + rhs.alpha[k] - state.a[k];
  }
  if (singular) throw Error(Stage::newton, "singular logarithm: w_i = a_j or eta_i = alpha_j");
  return f;
}

ComplexGrid solve_linearized(const NewtonState& state, std::span<const Complex> f, const CanonicalParameters& params,
                             const Discretization& disc, JacobianModel model, LinearizedInfo* info) {
  check_shapes(state, params, disc);
  const std::size_t ell = disc.ell;
  const std::size_t total = disc.size();
  if (f.size() != total + ell) throw Error(Stage::newton, "right-hand side has wrong length");

  const CauchyData cd = cauchy_data(state, params);
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (const Complex& d : cd.d) {
    dmin = std::min(dmin, std::abs(d));
    dmax = std::max(dmax, std::abs(d));
  }
  if (!(dmin > 1e-12))
    throw Error(Stage::newton, "diagonal block D is nearly singular; try a different starting point (s0, delta)");

  const std::vector<Complex> e = moment_diagonal(state, cd, disc, model);
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);

  // S = A2 D^{-1} A1 - E and g = A2 D^{-1} b - c, straight from the Cauchy-matrix entries.
  Eigen::MatrixXcd schur(ell, ell);
  Eigen::VectorXcd g(ell);
  const std::ptrdiff_t nl = static_cast<std::ptrdiff_t>(ell);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t rr = 0; rr < nl; ++rr) {
    const std::size_t r = static_cast<std::size_t>(rr);
    for (std::size_t s = 0; s < ell; ++s) {
      Complex acc{};
      for (std::size_t k = 0; k < total; ++k)
        acc += disc.eta_dot[k] * cd.c[k * ell + r] * cd.c[k * ell + s] / cd.d[k];
      schur(rr, static_cast<Eigen::Index>(s)) = -scale * params.m[s] * acc;
    }
    Complex acc{};
    for (std::size_t k = 0; k < total; ++k) acc += f[k] * disc.eta_dot[k] * cd.c[k * ell + r] / cd.d[k];
    g(rr) = scale * acc - f[total + r];
  }
  for (std::size_t r = 0; r < ell; ++r) schur(r, r) -= e[r];

  const auto y = solve_small<Complex>(schur, g, 1e-14);
  if (!y) throw Error(Stage::newton, "Schur complement matrix is singular (Jacobian singular at this iterate)");

  if (info) {
    info->min_abs_d = dmin;
    info->cond_d = dmax / dmin;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(schur);
    const auto& sv = svd.singularValues();
    info->cond_schur = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  }

  ComplexGrid v(total + ell);
  const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nt; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    Complex acc = f[i];
    for (std::size_t k = 0; k < ell; ++k) acc += params.m[k] * (*y)(static_cast<Eigen::Index>(k)) * cd.c[i * ell + k];
    v[i] = acc / cd.d[i];
  }
  for (std::size_t k = 0; k < ell; ++k) v[total + k] = (*y)(static_cast<Eigen::Index>(k));
  return v;
}

ComplexGrid apply_jacobian(const NewtonState& state, std::span<const Complex> v, const CanonicalParameters& params,
                           const Discretization& disc, JacobianModel model) {
  check_shapes(state, params, disc);
  const std::size_t ell = disc.ell;
  const std::size_t total = disc.size();
  if (v.size() != total + ell) throw Error(Stage::newton, "vector has wrong length");
  const CauchyData cd = cauchy_data(state, params);
  const std::vector<Complex> e = moment_diagonal(state, cd, disc, model);
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);
  ComplexGrid out(total + ell);
  for (std::size_t i = 0; i < total; ++i) {
    Complex acc = cd.d[i] * v[i];
    for (std::size_t j = 0; j < ell; ++j) acc -= params.m[j] * cd.c[i * ell + j] * v[total + j];
    out[i] = acc;
  }
  for (std::size_t k = 0; k < ell; ++k) {
    Complex acc{};
    for (std::size_t q = 0; q < total; ++q) acc += disc.eta_dot[q] * cd.c[q * ell + k] * v[q];
    out[total + k] = scale * acc + e[k] * v[total + k];
  }
  return out;
}

double lemniscate_residual(std::span<const Complex> w, const LemniscaticDomain& domain) {
  const double log_tau = std::log(domain.tau);
  double worst = 0.0;
  for (const Complex& wi : w) {
    double s = 0.0;
    for (std::size_t j = 0; j < domain.a.size(); ++j) s += domain.m[j] * std::log(std::abs(wi - domain.a[j]));
    worst = std::max(worst, domain.tau * std::abs(std::expm1(s - log_tau)));
  }
  return worst;
}

double lemniscate_residual_offgrid(const Discretization& disc, std::span<const Complex> w,
                                   const LemniscaticDomain& domain) {
  if (w.size() != disc.size()) throw Error(Stage::newton, "boundary values have wrong length");
  const std::size_t n = disc.n;
  const std::size_t half = n / 2;
  Eigen::FFT<double> fft;
  ComplexGrid mid;
  mid.reserve(w.size());
  for (std::size_t k = 0; k < disc.ell; ++k) {
    std::vector<Complex> block(w.begin() + static_cast<std::ptrdiff_t>(k * n),
                               w.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
    std::vector<Complex> spec;
    fft.fwd(spec, block);
    for (std::size_t q = 0; q < n; ++q) {
      if (q == half) {
        spec[q] = 0.0;  // cos(n t / 2) vanishes at the midpoints
        continue;
      }
      const double freq = q < half ? static_cast<double>(q) : static_cast<double>(q) - static_cast<double>(n);
      spec[q] *= std::exp(kI * (freq * kPi / static_cast<double>(n)));
    }
    std::vector<Complex> back;
    fft.inv(back, spec);
    mid.insert(mid.end(), back.begin(), back.end());
  }
  return lemniscate_residual(mid, domain);
}

bool check_winding(const Discretization& disc, std::span<const Complex> w, std::span<const Complex> a) {
  try {
    for (std::size_t j = 0; j < disc.ell; ++j) {
      const auto block = w.subspan(j * disc.n, disc.n);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const int wn = winding_number(block, a[k]);
        if (wn != (k == j ? -1 : 0)) return false;
      }
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

std::size_t count_branch_jumps(const Discretization& disc, std::span<const Complex> w, std::span<const Complex> a,
                               std::span<const Complex> alpha) {
  std::size_t jumps = 0;
  for (std::size_t k = 0; k < disc.ell; ++k) {
    const std::size_t b = disc.begin_of(k);
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (std::size_t p = 0; p < disc.n; ++p) {
        const std::size_t i = b + p;
        const std::size_t nx = b + (p + 1) % disc.n;
        const double t0 = std::arg((w[i] - a[j]) / (disc.eta[i] - alpha[j]));
        const double t1 = std::arg((w[nx] - a[j]) / (disc.eta[nx] - alpha[j]));
        if (std::abs(t1 - t0) > kPi) ++jumps;
      }
    }
  }
  return jumps;
}

MapSolution newton_iterate(NewtonState state, const Discretization& disc, const BoundaryRHS& rhs,
                           const CanonicalParameters& params, const NewtonOptions& options) {
  const std::size_t total = disc.size();
  const std::size_t ell = disc.ell;
  auto finish = [&](bool converged) {
    MapSolution sol;
    sol.boundary_w = state.w;
    sol.domain = LemniscaticDomain{state.a, params.m, params.tau};
    MapDiagnostics& dg = sol.diagnostics;
    dg.converged = converged;
    dg.newton_iterations = state.k;
    dg.step_norm_history = state.step_norm_history;
    dg.cond_d_history = state.cond_d_history;
    dg.cond_schur_history = state.cond_schur_history;
    dg.corner_domain = disc.graded;
    try {
      const ComplexGrid f = residual_F(state, rhs, params, disc);
      dg.residual_inf = inf_norm(f);
      dg.moment_residual = inf_norm(std::span<const Complex>(f).subspan(total, ell));
    } catch (const Error&) {
      dg.residual_inf = std::numeric_limits<double>::infinity();
      dg.moment_residual = std::numeric_limits<double>::infinity();
    }
    dg.lemniscate_residual = lemniscate_residual(state.w, sol.domain);
    dg.lemniscate_residual_offgrid = lemniscate_residual_offgrid(disc, state.w, sol.domain);
    dg.winding_ok = check_winding(disc, state.w, state.a);
    dg.branch_jumps = count_branch_jumps(disc, state.w, state.a, rhs.alpha);
    return sol;
  };

  double first_step = 0.0;
  while (state.k < options.max_iter) {
    ComplexGrid f;
    ComplexGrid v;
    LinearizedInfo info;
    try {
      f = residual_F(state, rhs, params, disc);
      v = solve_linearized(state, f, params, disc, options.model, &info);
    } catch (const Error& e) {
      throw NewtonError(std::string(e.what()) + " at iteration " + std::to_string(state.k), finish(false));
    }
    for (std::size_t i = 0; i < total; ++i) state.w[i] -= v[i];
    for (std::size_t k = 0; k < ell; ++k) state.a[k] -= v[total + k];
    ++state.k;
    const double step = inf_norm(v);
    state.step_norm_history.push_back(step);
    state.cond_d_history.push_back(info.cond_d);
    state.cond_schur_history.push_back(info.cond_schur);
    if (!std::isfinite(step)) throw NewtonError("non-finite Newton step", finish(false));
    if (state.k == 1) first_step = step;
    if (step <= options.tol) return finish(true);
    if (step > options.divergence_factor * first_step)
      throw NewtonError("Newton iteration diverged", finish(false));
  }
  throw NewtonError("Newton did not converge in " + std::to_string(options.max_iter) + " iterations",
                    finish(false));
}

MapSolution newton_solve(const Discretization& disc, const BoundaryRHS& rhs, const CanonicalParameters& params,
                         const NewtonOptions& options) {
  int spent = 0;
  auto attempt = [&](const StartOptions& start, const char* label) {
    MapSolution sol;
    try {
      sol = newton_iterate(initial_guess(disc, start), disc, rhs, params, options);
    } catch (const NewtonError& e) {
      spent += e.partial().diagnostics.newton_iterations;
      MapSolution partial = e.partial();
      partial.diagnostics.start_used = label;
      partial.diagnostics.iterations_all_attempts = spent;
      throw NewtonError(e.what(), partial);
    }
    spent += sol.diagnostics.newton_iterations;
    sol.diagnostics.start_used = label;
    sol.diagnostics.iterations_all_attempts = spent;
    if (!sol.diagnostics.winding_ok)
      throw NewtonError("converged boundary values do not wind once around their centers", sol);
    if (sol.diagnostics.branch_jumps != 0)
      throw NewtonError("converged state crosses a logarithm branch cut at " +
                            std::to_string(sol.diagnostics.branch_jumps) + " node pair(s)",
                        sol);
    return sol;
  };
  const bool heuristic = options.start.mode == StartMode::circles && options.start.centers.empty();
  if (options.start.mode == StartMode::identity) return attempt(options.start, "identity");
  try {
    return attempt(options.start, "circles");
  } catch (const NewtonError& first) {
    if (!heuristic || (!options.branch_retry && !options.identity_fallback)) throw;
    std::string trail = first.what();
    if (options.branch_retry) {
      StartOptions retry = options.start;
      retry.delta = 0.5 * options.start.delta;
      retry.s0 = 1.0 + 2.0 * (options.start.s0 - 1.0);
      try {
        MapSolution sol = attempt(retry, "circles-retry");
        sol.diagnostics.branch_retry_used = true;
        return sol;
      } catch (const NewtonError& second) {
        if (!options.identity_fallback) throw;
        trail += "; retry: " + std::string(second.what());
      }
    }
    StartOptions ident = options.start;
    ident.mode = StartMode::identity;
    try {
      MapSolution sol = attempt(ident, "identity");
      sol.diagnostics.branch_retry_used = options.branch_retry;
      return sol;
    } catch (const NewtonError& last) {
      throw NewtonError(trail + "; identity start: " + last.what(), last.partial());
    }
  }
}

}  // namespace lemniscatic
