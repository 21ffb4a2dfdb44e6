#include <gtest/gtest.h>

#include <cmath>

#include "lemniscatic/geometry.hpp"
#include "support.hpp"

namespace lemniscatic {
namespace {

using test::circle;

TEST(Geometry, CircleAxisPoints) {
  const BoundaryCurve c = make_curve(CircleParams{{}, 2.0});
  EXPECT_NEAR(std::abs(c.eval(0.0).eta - Complex(2.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.eval(kPi / 2).eta - Complex(0.0, -2.0)), 0.0, 1e-15);
}

TEST(Geometry, TrigRadialFirstCurveStartsAt155) {
  TrigRadialParams p;
  p.constant = 1.25;
  p.terms = {RadialTerm{0.5, 0.0, 0.0, 0, 0, 4, 1}, RadialTerm{0.3, 0.0, 0.0, 1, 1, 0, 0}};
  const BoundaryCurve c = make_curve(p);
  EXPECT_NEAR(std::abs(c.eval(0.0).eta - Complex(1.55, 0.0)), 0.0, 1e-15);
}

TEST(Geometry, EllipseIsClockwise) {
  const BoundaryCurve c = make_curve(EllipseParams{{}, 2.0, 1.0, 0.0});
  EXPECT_NEAR(std::abs(c.eval(0.0).eta - Complex(2.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.eval(kPi / 2).eta - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Geometry, DerivativesMatchFiniteDifferences) {
  TrigRadialParams p;
  p.constant = 0.75;
  p.terms = {RadialTerm{0.25, 1.0, 0.0, 3, 2, 0, 0}, RadialTerm{0.5, 0.0, 1.0, 0, 0, 2, 2}};
  const BoundaryCurve c = make_curve(p, Affine{{0.3, 1.1}, {2.0, -1.0}});
  const double h = 1e-5;
  for (double t : {0.1, 1.3, 2.9, 4.4, 6.0}) {
    const CurvePoint x = c.eval(t);
    const Complex d1 = (c.eval(t + h).eta - c.eval(t - h).eta) / (2 * h);
    const Complex d2 = (c.eval(t + h).eta_dot - c.eval(t - h).eta_dot) / (2 * h);
    EXPECT_LT(std::abs(d1 - x.eta_dot), 1e-8);
    EXPECT_LT(std::abs(d2 - x.eta_ddot), 1e-8);
  }
}

TEST(Geometry, RejectsBadCurves) {
  EXPECT_THROW(make_curve(CircleParams{{}, -1.0}), Error);
  EXPECT_THROW(make_curve(PolygonParams{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 3}), Error);  // counterclockwise
  TrigRadialParams p;
  p.constant = 0.2;
  p.terms = {RadialTerm{0.5, 0.0, 0.0, 1, 1, 0, 0}};
  EXPECT_THROW(make_curve(p), Error);
}

TEST(Geometry, DiscretizeNodesAndLayout) {
  const Discretization one = circle(4);
  ASSERT_EQ(one.nodes.size(), 4u);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_DOUBLE_EQ(one.nodes[p], static_cast<double>(p) * kPi / 2);
  EXPECT_NEAR(std::abs(one.eta_dot[0] - Complex(0.0, -1.0)), 0.0, 1e-15);

  const Discretization two =
      discretize({make_curve(CircleParams{{-3, 0}, 1}), make_curve(CircleParams{{3, 0}, 1})}, 4);
  ASSERT_EQ(two.size(), 8u);
  const std::vector<std::size_t> expect{0, 0, 0, 0, 1, 1, 1, 1};
  EXPECT_EQ(two.component_of, expect);
}

TEST(Geometry, DiscretizeRejectsOddOrSmallN) {
  EXPECT_THROW(circle(5), Error);
  EXPECT_THROW(circle(2), Error);
}

TEST(Geometry, DiscretizeRejectsOverlappingCurves) {
  EXPECT_THROW(discretize({make_curve(CircleParams{{0, 0}, 1}), make_curve(CircleParams{{0.5, 0}, 1})}, 32), Error);
}

TEST(Geometry, Centroid) {
  EXPECT_NEAR(std::abs(centroid(circle(16, 1.0, {3.0, 1.0}), 0) - Complex(3.0, 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(centroid(circle(16), 0)), 0.0, 1e-15);
  const Discretization sq = discretize({make_curve(PolygonParams{{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}, 3})}, 32);
  EXPECT_NEAR(std::abs(centroid(sq, 0)), 0.0, 1e-14);
}

TEST(Geometry, CentroidTranslationEquivariant) {
  const Complex b(0.37, -2.1);
  TrigRadialParams p;
  p.constant = 1.25;
  p.terms = {RadialTerm{0.4, 0.0, 0.0, 0, 0, 2, 1}, RadialTerm{0.2, 0.0, 0.0, 3, 1, 0, 0}};
  const Discretization d0 = discretize({make_curve(p)}, 64);
  const Discretization d1 = discretize({make_curve(p, Affine{{1.0, 0.0}, b})}, 64);
  EXPECT_NEAR(std::abs(centroid(d1, 0) - (centroid(d0, 0) + b)), 0.0, 1e-14);
}

TEST(Geometry, WindingNumber) {
  const Discretization d = circle(32);
  EXPECT_EQ(winding_number(d.component_eta(0), {0.0, 0.0}), -1);
  EXPECT_EQ(winding_number(d.component_eta(0), {3.0, 0.0}), 0);
  const Discretization ccw = discretize({make_curve_unchecked(CircleParams{{}, 1.0}, Affine{{1.0, 0.0}, {}})}, 32);
  ComplexGrid rev(ccw.eta.rbegin(), ccw.eta.rend());
  EXPECT_EQ(winding_number(rev, {0.0, 0.0}), 1);
  EXPECT_THROW(winding_number(d.component_eta(0), d.eta[3]), Error);
}

double total_turning(const Discretization& d, std::size_t j) {
  double turn = 0.0;
  for (std::size_t i = d.begin_of(j); i < d.begin_of(j) + d.n; ++i)
    turn += (d.eta_ddot[i] / d.eta_dot[i]).imag() * d.weight();
  return turn / kTwoPi;
}

TEST(Geometry, TotalTurningIsMinusOne) {
  for (std::size_t n : {64u, 128u, 256u})
    for (const Discretization& d : {circle(n, 2.0), test::ellipse(n)}) EXPECT_NEAR(total_turning(d, 0), -1.0, 1e-8);
  // the seven nonconvex curves need n = 1024 before the rule resolves their curvature
  const Discretization seven = test::discretize_problem("seven_curves", 1024);
  for (std::size_t j = 0; j < seven.ell; ++j) EXPECT_NEAR(total_turning(seven, j), -1.0, 1e-8);
}

TEST(Geometry, TurningOfR4ConvergesSpectrally) {
  // frozen from a sympy evaluation of the same trapezoidal sum
  EXPECT_NEAR(total_turning(test::r4_curve(128), 0) + 1.0, -6.4118779581126e-03, 1e-12);
  EXPECT_NEAR(total_turning(test::r4_curve(256), 0) + 1.0, 3.926447160529e-05, 1e-12);
  EXPECT_LT(std::abs(total_turning(test::r4_curve(512), 0) + 1.0), 2e-9);
}

TEST(Geometry, GradedSquareKeepsNodesOffCorners) {
  const BoundaryCurve sq = make_curve(PolygonParams{{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}, 3});
  const Discretization d = discretize({sq}, 16);
  ASSERT_TRUE(d.graded);
  const std::vector<Complex> corners{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}};
  for (Complex z : d.eta) {
    double dist = 1e300;
    for (Complex c : corners) dist = std::min(dist, std::abs(z - c));
    EXPECT_GT(dist, 0.0);
  }
  for (Complex v : d.eta_dot) EXPECT_GT(std::abs(v), 0.0);
}

TEST(Geometry, GradingSlowsTheParametrizationNearCorners) {
  const BoundaryCurve sq = make_curve(PolygonParams{{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}, 3});
  const Discretization d = discretize({sq}, 64);
  const std::vector<Complex> corners{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}};
  std::size_t nearest = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (Complex c : corners)
      if (std::abs(d.eta[i] - c) < best) {
        best = std::abs(d.eta[i] - c);
        nearest = i;
      }
  // the arc midpoint sits half an arc (n/8 nodes) away from a corner node
  const std::size_t mid = (nearest + d.n / 8) % d.n;
  EXPECT_LT(std::abs(d.eta_dot[nearest]), std::abs(d.eta_dot[mid]));
}

TEST(Geometry, GradingASmoothCurveIsAnError) {
  EXPECT_THROW(graded_reparam(make_curve(CircleParams{{}, 1.0}), 3), Error);
}

TEST(Geometry, GradedSquarePerimeter) {
  const BoundaryCurve sq = make_curve(PolygonParams{{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}, 3});
  const Discretization d = discretize({sq}, 256);
  double len = 0.0;
  for (Complex v : d.eta_dot) len += std::abs(v) * d.weight();
  EXPECT_NEAR(len, 8.0, 1e-6);
}

}  // namespace
}  // namespace lemniscatic
