#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lemniscatic/common.hpp"
#include "lemniscatic/jet.hpp"

namespace lemniscatic {

enum class CurveFamily { circle, ellipse, trig_radial, polygon, fourier };

const char* family_name(CurveFamily family);

/// eta(t) = center + radius * e^{-it}
struct CircleParams {
  Complex center{};
  double radius = 1.0;
};

/// eta(t) = center + e^{i rotation} (a cos t - i b sin t)
struct EllipseParams {
  Complex center{};
  double a = 1.0;
  double b = 1.0;
  double rotation = 0.0;
};

/// One factor of a radial function:
/// coef * e^{exp_cos cos t + exp_sin sin t} * cos(cos_freq t)^cos_pow * sin(sin_freq t)^sin_pow
struct RadialTerm {
  double coef = 0.0;
  double exp_cos = 0.0;
  double exp_sin = 0.0;
  int cos_freq = 0;
  int cos_pow = 0;
  int sin_freq = 0;
  int sin_pow = 0;
};

/// eta(t) = center + r(t) e^{-it}, r(t) = constant + sum of terms.
struct TrigRadialParams {
  Complex center{};
  double constant = 1.0;
  std::vector<RadialTerm> terms;
};

/// Closed polygon, vertices in clockwise order, one parameter interval of
/// length 2pi/V per side.
struct PolygonParams {
  std::vector<Complex> vertices;
  int grading = 3;
};

/// eta(t) = sum_k c_k e^{ikt}
struct FourierParams {
  struct Coefficient {
    int k = 0;
    Complex c{};
  };
  std::vector<Coefficient> coefficients;
};

using CurveParams =
    std::variant<CircleParams, EllipseParams, TrigRadialParams, PolygonParams, FourierParams>;

/// z -> scale * z + shift applied after the family formula.
struct Affine {
  Complex scale{1.0, 0.0};
  Complex shift{};
};

struct CurvePoint {
  Complex eta;
  Complex eta_dot;
  Complex eta_ddot;
};

/// Kress-type grading applied on every corner-to-corner arc.
struct Grading {
  int exponent = 3;
  double phase = 0.0;  ///< parameter shift of the corner positions
};

/// A 2pi-periodic, clockwise Jordan curve with analytic first and second derivatives.
class BoundaryCurve {
 public:
  CurveFamily family() const noexcept;
  const CurveParams& params() const noexcept { return params_; }
  const Affine& transform() const noexcept { return transform_; }
  const std::optional<Grading>& grading() const noexcept { return grading_; }

  CurvePoint eval(double t) const;
  Jet<Complex> eval_jet(const Jet<double>& t) const;

  /// Parameter values where eta_dot is discontinuous (after grading, where it vanishes).
  std::vector<double> corners() const;
  bool has_corners() const noexcept;

  /// Grading exponent requested by the family parameters (polygon only).
  int requested_grading() const noexcept;

  BoundaryCurve transformed(const Affine& map) const;

 private:
  friend BoundaryCurve make_curve(const CurveParams&, const Affine&);
  friend BoundaryCurve make_curve_unchecked(const CurveParams&, const Affine&);
  friend BoundaryCurve graded_reparam(const BoundaryCurve&, int, double);

  Jet<Complex> eval_base(const Jet<double>& t) const;
  std::vector<double> base_corners() const;

  CurveParams params_;
  Affine transform_;
  std::optional<Grading> grading_;
};

/// Validating constructor. Rejects non-positive radii, radial functions
/// with nonpositive minimum, self-intersecting or counterclockwise polygons
/// and counterclockwise curves in general.
BoundaryCurve make_curve(const CurveParams& params, const Affine& transform = {});

/// No orientation or shape checks; for tests that need e.g. a counterclockwise circle.
BoundaryCurve make_curve_unchecked(const CurveParams& params, const Affine& transform = {});

/// Reparametrize a curve with corners so that nodes cluster at the corners.
/// The substitution on each arc has derivative vanishing to order `exponent`
/// at both endpoints. Corners sit at 2pi k / K + phase in the new parameter.
BoundaryCurve graded_reparam(const BoundaryCurve& curve, int exponent, double phase = 0.0);

struct Discretization {
  std::size_t ell = 0;
  std::size_t n = 0;
  std::vector<double> nodes;  ///< local parameter of each node, (p-1) 2pi/n
  ComplexGrid eta;
  ComplexGrid eta_dot;
  ComplexGrid eta_ddot;
  std::vector<std::size_t> component_of;
  std::vector<BoundaryCurve> curves;  ///< curves as sampled (graded when they had corners)
  bool graded = false;
  int grading_exponent = 0;

  std::size_t size() const noexcept { return ell * n; }
  std::size_t begin_of(std::size_t k) const noexcept { return k * n; }
  std::span<const Complex> component_eta(std::size_t k) const {
    return std::span<const Complex>(eta).subspan(k * n, n);
  }
  double weight() const noexcept { return kTwoPi / static_cast<double>(n); }
};

struct DiscretizeOptions {
  double min_separation = 1e-8;
};

Discretization discretize(const std::vector<BoundaryCurve>& curves, std::size_t n,
                          const DiscretizeOptions& options = {});

/// Build a discretization straight from samples (one block of n per component).
/// Only the layout invariants are checked.
Discretization discretization_from_samples(std::size_t n, ComplexGrid eta, ComplexGrid eta_dot,
                                           ComplexGrid eta_ddot);

/// Mean of the node samples of component j (0-based).
Complex centroid(const Discretization& disc, std::size_t j);

/// Winding number of the closed polyline around `point`. Throws if the point is on the polyline.
int winding_number(std::span<const Complex> polyline, Complex point);

/// Largest pairwise distance between samples.
double diameter(std::span<const Complex> samples);

}  // namespace lemniscatic
