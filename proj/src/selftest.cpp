#include "lemniscatic/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/cauchy.hpp"
#include "lemniscatic/kernels.hpp"
#include "lemniscatic/newton.hpp"
#include "lemniscatic/oracle.hpp"

namespace lemniscatic {

namespace {

class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  void check(const std::string& name, double value, double bound) {
    const bool ok = std::isfinite(value) && value <= bound;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e <= %.0e", value, bound);
    out_ << (ok ? "PASS  " : "FAIL  ") << name << "  " << buf << '\n';
    if (!ok) ++failures_;
  }

  void fail(const std::string& name, const std::string& why) {
    out_ << "FAIL  " << name << "  " << why << '\n';
    ++failures_;
  }

  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

double max_abs(const GridFunction& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Discretization two_disks(std::size_t n) {
  return discretize({make_curve(CircleParams{{-1.0, 0.0}, 0.5}), make_curve(CircleParams{{1.0, 0.0}, 0.5})}, n);
}

}  // namespace

int run_selftest(std::size_t n, std::ostream& out) {
  Report rep(out);
  out << "selftest n=" << n << '\n';
  if (n < 4 || n % 2 != 0) {
    rep.fail("precondition", "n must be even and >= 4");
    return rep.failures();
  }

  try {
    GridFunction c(n);
    for (std::size_t p = 0; p < n; ++p) c[p] = std::cos(2.0 * kTwoPi * static_cast<double>(p) / static_cast<double>(n));
    const GridFunction hc = kernels::conjugate_periodic(c);
    double err = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      err = std::max(err, std::abs(hc[p] - std::sin(2.0 * kTwoPi * static_cast<double>(p) / static_cast<double>(n))));
    rep.check("kernels.conjugation_cos2t", err, 1e-13);

    const Discretization disc = two_disks(n);
    double nerr = 0.0;
    double merr = 0.0;
    for (std::size_t j = 0; j < disc.ell; ++j) {
      const GridFunction e = component_indicator(disc, j);
      GridFunction ne = kernels::apply_N(disc, e);
      for (std::size_t i = 0; i < ne.size(); ++i) ne[i] += e[i];
      nerr = std::max(nerr, max_abs(ne));
      merr = std::max(merr, max_abs(kernels::apply_M(disc, e)));
    }
    rep.check("kernels.N_indicator", nerr, 1e-8);
    rep.check("kernels.M_indicator", merr, 1e-8);

    GridFunction a(disc.size()), b(disc.size());
    for (std::size_t i = 0; i < disc.size(); ++i) {
      const Complex f = 1.0 / (disc.eta[i] - Complex(-1.1, 0.05));
      a[i] = f.real();
      b[i] = f.imag();
    }
    const GridFunction imnb = kernels::apply_I_minus_N(disc, b);
    const GridFunction ma = kernels::apply_M(disc, a);
    GridFunction id(disc.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = imnb[i] + ma[i];
    rep.check("kernels.analytic_identity", max_abs(id), 1e-10);

    const GridFunction np = kernels::apply_N(disc, b);
    const GridFunction ns = kernels::serial::apply_N(disc, b);
    double diff = 0.0;
    for (std::size_t i = 0; i < np.size(); ++i) diff = std::max(diff, std::abs(np[i] - ns[i]));
    rep.check("kernels.parallel_equals_serial", diff, 0.0);

    const BieSolution bie = solve_bie(disc);
    rep.check("bie.sum_m", std::abs(bie.params.m[0] + bie.params.m[1] - 1.0), 1e-12);
    rep.check("bie.symmetric_m", std::abs(bie.params.m[0] - 0.5), 1e-10);
    double rowc = 0.0;
    for (Eigen::Index k = 0; k < 2; ++k)
      rowc = std::max(rowc, std::abs(bie.h(k, 0) * bie.params.m[0] + bie.h(k, 1) * bie.params.m[1] - bie.params.log_tau));
    rep.check("bie.row_consistency", rowc, 1e-10);

    const oracle::CapacityResult cap = oracle::capacity_logkernel(disc);
    rep.check("oracle.capacity_vs_tau", std::abs(cap.capacity - bie.params.tau), 1e-7);

    const MapSolution sol = newton_solve(disc, bie.rhs, bie.params);
    rep.check("newton.final_step", sol.diagnostics.step_norm_history.back(), 1e-11);
    rep.check("newton.lemniscate_residual", sol.diagnostics.lemniscate_residual, 1e-9);
    rep.check("newton.moment_residual", sol.diagnostics.moment_residual, 1e-8);
    rep.check("newton.winding", sol.diagnostics.winding_ok ? 0.0 : 1.0, 0.0);

    const oracle::IdentityFixture fx = oracle::reference_identity_domain(2.0, {0.0, 0.0}, n);
    const ComplexGrid f0 = residual_F(fx.state, fx.rhs, fx.params, fx.disc);
    double r0 = 0.0;
    for (Complex z : f0) r0 = std::max(r0, std::abs(z));
    rep.check("oracle.identity_residual", r0, 1e-13);

    const Complex far(5.0, 0.0);
    const auto ev = eval_map(fx.solution, fx.disc, EvaluationRequest{{far}, NearBoundaryPolicy::automatic});
    rep.check("cauchy.identity_far_point", std::abs(ev[0].value - far), 1e-12);

    const Discretization small = two_disks(16);
    const BieSolution sb = solve_bie(small);
    NewtonState st = initial_guess(small);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (Complex& w : st.w) w += Complex(u(rng), u(rng));
    const ComplexGrid fs = residual_F(st, sb.rhs, sb.params, small);
    const ComplexGrid step = solve_linearized(st, fs, sb.params, small);
    const Eigen::MatrixXcd jac = oracle::dense_jacobian(st, sb.params, small);
    const Eigen::VectorXcd fv = Eigen::Map<const Eigen::VectorXcd>(fs.data(), static_cast<Eigen::Index>(fs.size()));
    const Eigen::VectorXcd dense = jac.partialPivLu().solve(fv);
    const Eigen::VectorXcd sv = Eigen::Map<const Eigen::VectorXcd>(step.data(), static_cast<Eigen::Index>(step.size()));
    rep.check("newton.schur_equals_dense", (sv - dense).norm() / dense.norm(), 1e-10);
  } catch (const std::exception& e) {
    rep.fail("exception", e.what());
  }
  out << (rep.failures() == 0 ? "all checks passed" : std::to_string(rep.failures()) + " check(s) failed") << '\n';
  return rep.failures();
}

}  // namespace lemniscatic
