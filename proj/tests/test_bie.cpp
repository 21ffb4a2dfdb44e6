#include <gtest/gtest.h>

#include <cmath>

#include "lemniscatic/bie.hpp"
#include "lemniscatic/gmres.hpp"
#include "lemniscatic/kernels.hpp"
#include "lemniscatic/oracle.hpp"
#include "support.hpp"

namespace lemniscatic {
namespace {

using test::max_abs;

// Capacities of the union of the disks |z -+ 1| <= r by charge simulation
// (tests/oracles/capacity_charges.py), converged to about 1e-15.
constexpr double kChargeCapacity05 = 1.0306512351870147;
constexpr double kChargeCapacity07 = 1.2524725556019711;
constexpr double kChargeCapacity09 = 1.4656986407297954;

TEST(Gmres, SolvesSmallNonsymmetricSystem) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(30, 30);
  const std::vector<double> noise = test::random_vector(900, 3, 0.05);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) a(i, j) += noise[static_cast<std::size_t>(30 * i + j)];
  const std::vector<double> b = test::random_vector(30, 4);
  const GmresResult r = gmres(
      [&](std::span<const double> x, std::span<double> y) {
        Eigen::Map<Eigen::VectorXd>(y.data(), 30) = a * Eigen::Map<const Eigen::VectorXd>(x.data(), 30);
      },
      b);
  ASSERT_TRUE(r.converged);
  const Eigen::VectorXd ref = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 30));
  for (int i = 0; i < 30; ++i) EXPECT_NEAR(r.x[static_cast<std::size_t>(i)], ref[i], 1e-12);
  EXPECT_LE(r.true_relres, 1e-13);
  EXPECT_EQ(static_cast<int>(r.history.size()), r.iterations);
}

TEST(Gmres, ZeroRightHandSideGivesZero) {
  const std::vector<double> b(10, 0.0);
  const GmresResult r = gmres([](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); }, b);
  EXPECT_EQ(r.iterations, 0);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}

TEST(Bie, GammaOfCircleAboutItsCenter) {
  const Discretization d = test::circle(32, 2.5);
  for (double g : gamma_j(d, 0, {})) EXPECT_NEAR(g, -std::log(2.5), 1e-15);
  for (double g : gamma_j(test::circle(32), 0, {})) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(Bie, GammaRejectsAuxiliaryPointOnANode) {
  const Discretization d = test::circle(32);
  EXPECT_THROW(gamma_j(d, 0, d.eta[5] + Complex(1e-15, 0.0)), Error);
}

TEST(Bie, CircleHasZeroDensity) {
  const double r = 2.0;
  const Discretization d = test::circle(64, r);
  const ComponentSolution s = solve_component(d, gamma_j(d, 0, {}));
  EXPECT_LE(max_abs(s.mu), 1e-12);
  EXPECT_NEAR(s.h.values[0], std::log(r), 1e-12);
}

TEST(Bie, HomogeneousEquationHasTrivialSolution) {
  const Discretization d = test::two_disks(32);
  const ComponentSolution s = solve_component(d, GridFunction(d.size(), 0.0));
  for (double v : s.mu) EXPECT_EQ(v, 0.0);
  for (double v : s.h.values) EXPECT_EQ(v, 0.0);
}

TEST(Bie, AnalyticDataHaveZeroH) {
  for (const Discretization& d : {test::ellipse(128), test::two_disks(128, 0.7)}) {
    const Complex alpha = d.ell == 1 ? Complex(0.4, 0.3) : Complex(-1.1, 0.2);
    GridFunction gamma(d.size()), im(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Complex f = 1.0 / (d.eta[i] - alpha);
      gamma[i] = f.real();
      im[i] = f.imag();
    }
    const ComponentSolution s = solve_component(d, gamma);
    EXPECT_LE(max_abs(s.h.values), 1e-9);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(s.mu[i], im[i], 1e-9);
  }
}

TEST(Bie, HSpreadShrinksSpectrally) {
  // the pointwise h is constant only up to discretization error: 1.8e-6 at n = 64, 5e-12 at n = 128
  double coarse = 0.0, fine = 0.0;
  for (const ComponentSolution& c : solve_bie(test::two_disks(64, 0.9)).components) coarse = std::max(coarse, c.h_spread);
  for (const ComponentSolution& c : solve_bie(test::two_disks(128, 0.9)).components) fine = std::max(fine, c.h_spread);
  EXPECT_LE(fine, 1e-10);
  EXPECT_LE(fine, coarse / 1e3);
}

TEST(Bie, SolveParametersForOneCurve) {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = std::log(3.0);
  const CanonicalParameters p = solve_parameters(h);
  ASSERT_EQ(p.m.size(), 1u);
  EXPECT_NEAR(p.m[0], 1.0, 1e-15);
  EXPECT_NEAR(p.tau, 3.0, 1e-14);
}

TEST(Bie, SolveParametersRejectsSingularH) {
  Eigen::MatrixXd h(2, 2);
  h << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(solve_parameters(h), Error);
}

TEST(Bie, SymmetricTwoDisksHaveEqualExponents) {
  for (double r : {0.5, 0.7, 0.9}) {
    const BieSolution b = solve_bie(test::two_disks(64, r));
    EXPECT_NEAR(b.params.m[0], 0.5, 1e-12);
    EXPECT_NEAR(b.params.m[0] + b.params.m[1], 1.0, 1e-12);
  }
}

TEST(Bie, CapacityMatchesChargeSimulation) {
  EXPECT_NEAR(solve_bie(test::two_disks(64, 0.5)).params.tau, kChargeCapacity05, 1e-12);
  EXPECT_NEAR(solve_bie(test::two_disks(128, 0.7)).params.tau, kChargeCapacity07, 1e-12);
  EXPECT_NEAR(solve_bie(test::two_disks(256, 0.9)).params.tau, kChargeCapacity09, 1e-12);
}

TEST(Bie, CapacityMatchesLogKernelOracle) {
  const Discretization d = test::two_disks(64, 0.5);
  EXPECT_NEAR(solve_bie(d).params.tau, oracle::capacity_logkernel(d).capacity, 1e-8);
}

TEST(Bie, ExponentsArePositive) {
  const BieSolution b = solve_bie(test::discretize_problem("sixteen_circles", 64));
  double sum = 0.0;
  for (double m : b.params.m) {
    EXPECT_GT(m, 0.0);
    sum += m;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_GT(b.params.tau, 0.0);
}

TEST(Bie, RowsAgreeOnLogTau) {
  for (const Discretization& d : {test::two_disks(64, 0.5), test::discretize_problem("seven_curves", 128)}) {
    const BieSolution b = solve_bie(d);
    for (Eigen::Index k = 0; k < b.h.rows(); ++k) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < b.h.cols(); ++j) row += b.h(k, j) * b.params.m[static_cast<std::size_t>(j)];
      EXPECT_NEAR(row, b.params.log_tau, 1e-10);
    }
  }
}

TEST(Bie, RhsOfCircleVanishes) {
  const BieSolution b = solve_bie(test::circle(64, 2.0, {0.5, -1.0}));
  EXPECT_LE(max_abs(b.rhs.p), 1e-12);
}

TEST(Bie, RhsSplitsIntoGammaAndMu) {
  const BieSolution b = solve_bie(test::discretize_problem("seven_curves", 64));
  for (std::size_t i = 0; i < b.rhs.p.size(); ++i) {
    EXPECT_NEAR(b.rhs.p[i].real() - b.params.log_tau, b.rhs.gamma[i], 1e-14);
    EXPECT_EQ(b.rhs.p[i].imag(), b.rhs.mu[i]);
  }
}

TEST(Bie, RhsWithZeroDensitiesIsReal) {
  const Discretization d = test::two_disks(16);
  std::vector<ComponentSolution> comps(2);
  for (ComponentSolution& c : comps) {
    c.mu.assign(d.size(), 0.0);
    c.h.values = {0.1, 0.2};
  }
  CanonicalParameters p{{0.5, 0.5}, 0.0, 1.0};
  const std::vector<Complex> alphas{{-1.0, 0.0}, {1.0, 0.0}};
  for (Complex z : assemble_rhs(d, alphas, comps, p).p) EXPECT_EQ(z.imag(), 0.0);
}

TEST(Bie, AuxiliaryPointsAreInterior) {
  const Discretization d = test::discretize_problem("seven_curves", 64);
  const std::vector<Complex> a = auxiliary_points(d);
  for (std::size_t j = 0; j < d.ell; ++j) EXPECT_EQ(winding_number(d.component_eta(j), a[j]), -1);
  std::vector<Complex> bad = a;
  bad[2] += Complex(0.0, 5.0);
  EXPECT_THROW(auxiliary_points(d, bad), Error);
  bad.pop_back();
  EXPECT_THROW(auxiliary_points(d, bad), Error);
}

TEST(Bie, SolvesAreDeterministic) {
  const Discretization d = test::discretize_problem("seven_curves", 64);
  const BieSolution a = solve_bie(d);
  const BieSolution b = solve_bie(d);
  for (std::size_t j = 0; j < d.ell; ++j) {
    EXPECT_EQ(a.components[j].mu, b.components[j].mu);
    EXPECT_EQ(a.components[j].gmres_iters, b.components[j].gmres_iters);
  }
  EXPECT_EQ(a.params.tau, b.params.tau);
}

TEST(Bie, GmresConvergesWithoutFallbackOnSixteenCircles) {
  const BieSolution b = solve_bie(test::discretize_problem("sixteen_circles", 128));
  for (const ComponentSolution& c : b.components) {
    EXPECT_FALSE(c.used_fallback);
    EXPECT_LE(c.gmres_true_relres, 1e-13);
  }
}

}  // namespace
}  // namespace lemniscatic
