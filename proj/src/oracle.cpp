#include "lemniscatic/oracle.hpp"

#include <cmath>

namespace lemniscatic::oracle {

std::vector<double> log_sine_weights(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw Error(Stage::oracle, "log-sine weights need an even n >= 4");
  const std::size_t half = n / 2;
  const double nd = static_cast<double>(n);
  std::vector<double> r(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double x = kTwoPi * static_cast<double>(d) / nd;
    double s = 0.0;
    for (std::size_t m = 1; m < half; ++m) s += std::cos(static_cast<double>(m) * x) / static_cast<double>(m);
    r[d] = -(kTwoPi / nd) * s - kPi / (nd * static_cast<double>(half)) * std::cos(static_cast<double>(half) * x);
  }
  return r;
}

CapacityResult capacity_logkernel(const Discretization& disc) {
  if (disc.graded) throw Error(Stage::oracle, "the capacity oracle is limited to smooth boundaries");
  const std::size_t n = disc.n;
  const std::size_t total = disc.size();
  const double w = disc.weight();
  const std::vector<double> rw = log_sine_weights(n);

  const Eigen::Index sz = static_cast<Eigen::Index>(total + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sz, sz);
  const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nt; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    const std::size_t ki = disc.component_of[i];
    for (std::size_t q = 0; q < total; ++q) {
      double v = 0.0;
      if (disc.component_of[q] == ki) {
        const std::size_t pi = i - ki * n;
        const std::size_t pq = q - ki * n;
        double smooth = 0.0;
        if (pi == pq) {
          smooth = std::log(std::abs(disc.eta_dot[i]));
        } else {
          const double ds = disc.nodes[i] - disc.nodes[q];
          smooth = std::log(std::abs(disc.eta[i] - disc.eta[q]) / std::abs(2.0 * std::sin(0.5 * ds)));
        }
        v = rw[(pi + n - pq) % n] + w * smooth;
      } else {
        v = w * std::log(std::abs(disc.eta[i] - disc.eta[q]));
      }
      a(ii, static_cast<Eigen::Index>(q)) = v;
    }
    a(ii, sz - 1) = -1.0;
  }
  for (std::size_t q = 0; q < total; ++q) a(sz - 1, static_cast<Eigen::Index>(q)) = w;

  Eigen::VectorXd b = Eigen::VectorXd::Zero(sz);
  b(sz - 1) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd x = lu.solve(b);
  const double rel = (a * x - b).norm();
  if (!x.allFinite() || rel > 1e-8) throw Error(Stage::oracle, "capacity system is singular");

  CapacityResult out;
  out.density.assign(x.data(), x.data() + total);
  out.robin_constant = x(sz - 1);
  out.capacity = std::exp(out.robin_constant);
  for (double d : out.density) out.mass += w * d;
  return out;
}

Eigen::MatrixXcd dense_jacobian(const NewtonState& state, const CanonicalParameters& params,
                                const Discretization& disc, JacobianModel model) {
  const std::size_t ell = disc.ell;
  const std::size_t total = disc.size();
  if (total + ell > 200) throw Error(Stage::oracle, "dense Jacobian is limited to ell n + ell <= 200");
  if (state.w.size() != total || state.a.size() != ell || params.m.size() != ell)
    throw Error(Stage::oracle, "state does not match the discretization");
  const Eigen::Index sz = static_cast<Eigen::Index>(total + ell);
  const Eigen::Index off = static_cast<Eigen::Index>(total);
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(sz, sz);
  const Complex scale = 1.0 / (static_cast<double>(disc.n) * kI);

  for (std::size_t i = 0; i < total; ++i) {
    Complex d{};
    for (std::size_t k = 0; k < ell; ++k) {
      const Complex c = 1.0 / (state.w[i] - state.a[k]);
      d += params.m[k] * c;
      j(static_cast<Eigen::Index>(i), off + static_cast<Eigen::Index>(k)) = -params.m[k] * c;
    }
    j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d;
  }
  for (std::size_t k = 0; k < ell; ++k) {
    Complex s{};
    for (std::size_t q = 0; q < total; ++q) {
      const Complex c = disc.eta_dot[q] / (state.w[q] - state.a[k]);
      j(off + static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)) = scale * c;
      s += c;
    }
    Complex e(-1.0, 0.0);
    if (model == JacobianModel::exact) e -= scale * s;
    j(off + static_cast<Eigen::Index>(k), off + static_cast<Eigen::Index>(k)) = e;
  }
  return j;
}

IdentityFixture reference_identity_domain(double r, Complex c, std::size_t n) {
  if (!(r > 0.0)) throw Error(Stage::oracle, "radius must be positive");
  IdentityFixture fx;
  fx.disc = discretize({make_curve(CircleParams{c, r})}, n);
  fx.params.m = {1.0};
  fx.params.log_tau = std::log(r);
  fx.params.tau = r;
  fx.rhs.alpha = {c};
  fx.rhs.gamma.assign(fx.disc.size(), -std::log(r));
  fx.rhs.mu.assign(fx.disc.size(), 0.0);
  fx.rhs.p.assign(fx.disc.size(), Complex{});
  fx.state.w = fx.disc.eta;
  fx.state.a = {c};
  fx.solution.boundary_w = fx.disc.eta;
  fx.solution.domain = LemniscaticDomain{{c}, {1.0}, r};
  fx.solution.diagnostics.converged = true;
  fx.solution.diagnostics.winding_ok = true;
  return fx;
}

}  // namespace lemniscatic::oracle
