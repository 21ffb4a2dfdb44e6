#include "lemniscatic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lemniscatic {

namespace {

constexpr int kShapeSamples = 4096;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double wrap_period(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

Jet<double> wrap_period(const Jet<double>& t) {
  return t - (t.v - wrap_period(t.v));
}

Jet<double> radial_function(const TrigRadialParams& p, const Jet<double>& t) {
  Jet<double> r(p.constant);
  const Jet<double> ct = cos(t);
  const Jet<double> st = sin(t);
  for (const RadialTerm& term : p.terms) {
    Jet<double> f(term.coef);
    if (term.exp_cos != 0.0 || term.exp_sin != 0.0) f = f * exp(term.exp_cos * ct + term.exp_sin * st);
    if (term.cos_pow > 0) f = f * pow(cos(static_cast<double>(term.cos_freq) * t), term.cos_pow);
    if (term.sin_pow > 0) f = f * pow(sin(static_cast<double>(term.sin_freq) * t), term.sin_pow);
    r = r + f;
  }
  return r;
}

// Kress substitution on [0, 2pi]: w(0) = 0, w(2pi) = 2pi, derivatives vanish to order p at both ends.
Jet<double> kress_substitution(const Jet<double>& sigma, int p) {
  const double ip = 1.0 / p;
  auto v = [ip](const Jet<double>& s) {
    const Jet<double> x = (kPi - s) * (1.0 / kPi);
    return (ip - 0.5) * pow(x, 3) - ip * x + 0.5;
  };
  const Jet<double> a = pow(v(sigma), p);
  const Jet<double> b = pow(v(kTwoPi - sigma), p);
  return kTwoPi * (a / (a + b));
}

double signed_area(std::span<const Complex> z) {
  double area = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Complex& a = z[i];
    const Complex& b = z[(i + 1) % z.size()];
    area += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * area;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](Complex a, Complex b, Complex c) {
    return std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

std::vector<Complex> sample(const BoundaryCurve& c, int count) {
  std::vector<Complex> z(count);
  for (int i = 0; i < count; ++i) z[i] = c.eval(kTwoPi * i / count).eta;
  return z;
}

void validate_polygon(const PolygonParams& poly) {
  const auto& v = poly.vertices;
  const std::size_t m = v.size();
  if (m < 3) throw Error(Stage::geometry, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < m; ++i)
    if (v[i] == v[(i + 1) % m]) throw Error(Stage::geometry, "polygon has repeated vertices");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]))
        throw Error(Stage::geometry, "polygon is self-intersecting");
    }
  }
  if (signed_area(v) >= 0.0)
    throw Error(Stage::geometry, "polygon vertices must be in clockwise order");
  if (poly.grading < 2) throw Error(Stage::geometry, "grading exponent must be >= 2");
}

}  // namespace

const char* family_name(CurveFamily family) {
  switch (family) {
    case CurveFamily::circle: return "circle";
    case CurveFamily::ellipse: return "ellipse";
    case CurveFamily::trig_radial: return "trig_radial";
    case CurveFamily::polygon: return "polygon";
    case CurveFamily::fourier: return "fourier";
  }
  return "unknown";
}

CurveFamily BoundaryCurve::family() const noexcept {
  return static_cast<CurveFamily>(params_.index());
}

bool BoundaryCurve::has_corners() const noexcept {
  return std::holds_alternative<PolygonParams>(params_);
}

int BoundaryCurve::requested_grading() const noexcept {
  if (const auto* poly = std::get_if<PolygonParams>(&params_)) return poly->grading;
  return 0;
}

std::vector<double> BoundaryCurve::base_corners() const {
  std::vector<double> out;
  if (const auto* poly = std::get_if<PolygonParams>(&params_)) {
    const std::size_t m = poly->vertices.size();
    for (std::size_t k = 0; k < m; ++k) out.push_back(kTwoPi * static_cast<double>(k) / m);
  }
  return out;
}

std::vector<double> BoundaryCurve::corners() const {
  std::vector<double> base = base_corners();
  if (!grading_) return base;
  std::vector<double> out;
  const std::size_t count = base.size();
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(wrap_period(kTwoPi * static_cast<double>(k) / count + grading_->phase));
  std::sort(out.begin(), out.end());
  return out;
}

Jet<Complex> BoundaryCurve::eval_base(const Jet<double>& t) const {
  return std::visit(
      Overloaded{
          [&](const CircleParams& c) { return c.center + c.radius * exp_minus_i(t); },
          [&](const EllipseParams& e) {
            const Jet<Complex> x = to_complex(e.a * cos(t));
            const Jet<Complex> y = to_complex(e.b * sin(t));
            const Complex rot = std::polar(1.0, e.rotation);
            return e.center + rot * (x - kI * y);
          },
          [&](const TrigRadialParams& p) {
            return p.center + to_complex(radial_function(p, t)) * exp_minus_i(t);
          },
          [&](const PolygonParams& p) {
            const std::size_t m = p.vertices.size();
            const Jet<double> tw = wrap_period(t);
            std::size_t k = static_cast<std::size_t>(std::floor(tw.v * m / kTwoPi));
            k = std::min(k, m - 1);
            const Jet<double> u = (tw - kTwoPi * static_cast<double>(k) / m) * (m / kTwoPi);
            const Complex a = p.vertices[k];
            const Complex b = p.vertices[(k + 1) % m];
            return a + (b - a) * to_complex(u);
          },
          [&](const FourierParams& f) {
            Jet<Complex> z(Complex{});
            for (const auto& c : f.coefficients)
              z = z + c.c * exp(to_complex(static_cast<double>(c.k) * t) * kI);
            return z;
          },
      },
      params_);
}

Jet<Complex> BoundaryCurve::eval_jet(const Jet<double>& tau) const {
  Jet<Complex> z;
  if (!grading_) {
    z = eval_base(tau);
  } else {
    const std::vector<double> base = base_corners();
    const std::size_t count = base.size();
    const Jet<double> tp = wrap_period(tau - grading_->phase);
    std::size_t k = static_cast<std::size_t>(std::floor(tp.v * count / kTwoPi));
    k = std::min(k, count - 1);
    const Jet<double> sigma = (tp - kTwoPi * static_cast<double>(k) / count) * static_cast<double>(count);
    const double c0 = base[k];
    const double c1 = k + 1 < count ? base[k + 1] : base[0] + kTwoPi;
    const Jet<double> t = c0 + ((c1 - c0) / kTwoPi) * kress_substitution(sigma, grading_->exponent);
    z = eval_base(t);
  }
  return transform_.scale * z + transform_.shift;
}

CurvePoint BoundaryCurve::eval(double t) const {
  const Jet<Complex> z = eval_jet(Jet<double>::variable(t));
  return {z.v, z.d1, z.d2};
}

BoundaryCurve BoundaryCurve::transformed(const Affine& map) const {
  if (map.scale == Complex{}) throw Error(Stage::geometry, "affine scale must be nonzero");
  BoundaryCurve out = *this;
  out.transform_.scale = map.scale * transform_.scale;
  out.transform_.shift = map.scale * transform_.shift + map.shift;
  return out;
}

BoundaryCurve make_curve_unchecked(const CurveParams& params, const Affine& transform) {
  BoundaryCurve c;
  c.params_ = params;
  c.transform_ = transform;
  return c;
}

BoundaryCurve make_curve(const CurveParams& params, const Affine& transform) {
  if (transform.scale == Complex{}) throw Error(Stage::geometry, "affine scale must be nonzero");
  std::visit(Overloaded{
                 [](const CircleParams& c) {
                   if (!(c.radius > 0.0)) throw Error(Stage::geometry, "circle radius must be positive");
                 },
                 [](const EllipseParams& e) {
                   if (!(e.a > 0.0) || !(e.b > 0.0))
                     throw Error(Stage::geometry, "ellipse semi-axes must be positive");
                 },
                 [](const TrigRadialParams& p) {
                   double rmin = std::numeric_limits<double>::infinity();
                   for (int i = 0; i < kShapeSamples; ++i) {
                     const double t = kTwoPi * i / kShapeSamples;
                     rmin = std::min(rmin, radial_function(p, Jet<double>(t)).v);
                   }
                   if (!(rmin > 0.0))
                     throw Error(Stage::geometry, "radial function has nonpositive minimum " +
                                                      std::to_string(rmin));
                 },
                 [](const PolygonParams& p) { validate_polygon(p); },
                 [](const FourierParams& f) {
                   if (f.coefficients.empty())
                     throw Error(Stage::geometry, "fourier curve needs coefficients");
                 },
             },
             params);

  BoundaryCurve c = make_curve_unchecked(params, transform);
  if (!c.has_corners()) {
    double min_speed = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kShapeSamples; ++i)
      min_speed = std::min(min_speed, std::abs(c.eval(kTwoPi * i / kShapeSamples).eta_dot));
    if (!(min_speed > 0.0)) throw Error(Stage::geometry, "curve derivative vanishes");
    if (signed_area(sample(c, kShapeSamples)) >= 0.0)
      throw Error(Stage::geometry, "curve must be oriented clockwise");
  }
  return c;
}

BoundaryCurve graded_reparam(const BoundaryCurve& curve, int exponent, double phase) {
  if (!curve.has_corners()) throw Error(Stage::geometry, "graded reparametrization needs a curve with corners");
  if (exponent < 2) throw Error(Stage::geometry, "grading exponent must be >= 2");
  if (curve.grading_) throw Error(Stage::geometry, "curve is already graded");
  BoundaryCurve out = curve;
  out.grading_ = Grading{exponent, phase};
  return out;
}

Discretization discretize(const std::vector<BoundaryCurve>& curves, std::size_t n,
                          const DiscretizeOptions& options) {
  if (curves.empty()) throw Error(Stage::geometry, "at least one curve is required");
  if (n < 4 || n % 2 != 0) throw Error(Stage::geometry, "n must be even and >= 4, got " + std::to_string(n));

  Discretization d;
  d.ell = curves.size();
  d.n = n;
  const std::size_t total = d.ell * n;
  d.nodes.resize(total);
  d.eta.resize(total);
  d.eta_dot.resize(total);
  d.eta_ddot.resize(total);
  d.component_of.resize(total);
  d.curves.reserve(d.ell);

  // Half a node spacing keeps corners off the grid whenever n is a multiple of the corner count.
  const double corner_phase = kPi / static_cast<double>(n);
  for (std::size_t k = 0; k < d.ell; ++k) {
    BoundaryCurve c = curves[k];
    if (c.has_corners()) {
      if (!c.grading()) c = graded_reparam(c, c.requested_grading(), corner_phase);
      d.graded = true;
      d.grading_exponent = std::max(d.grading_exponent, c.grading()->exponent);
    }
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t i = k * n + p;
      const double t = kTwoPi * static_cast<double>(p) / static_cast<double>(n);
      const CurvePoint pt = c.eval(t);
      if (!(std::abs(pt.eta_dot) > 0.0))
        throw Error(Stage::geometry, "node " + std::to_string(i) + " has vanishing eta_dot (node on a corner)");
      d.nodes[i] = t;
      d.eta[i] = pt.eta;
      d.eta_dot[i] = pt.eta_dot;
      d.eta_ddot[i] = pt.eta_ddot;
      d.component_of[i] = k;
    }
    d.curves.push_back(std::move(c));
  }

  for (std::size_t j = 0; j < d.ell; ++j) {
    for (std::size_t k = j + 1; k < d.ell; ++k) {
      double dmin = std::numeric_limits<double>::infinity();
      for (const Complex& a : d.component_eta(j))
        for (const Complex& b : d.component_eta(k)) dmin = std::min(dmin, std::abs(a - b));
      if (!(dmin > options.min_separation))
        throw Error(Stage::geometry, "curves " + std::to_string(j) + " and " + std::to_string(k) +
                                         " overlap (min sampled distance " + std::to_string(dmin) + ")");
      if (winding_number(d.component_eta(j), d.component_eta(k)[0]) != 0 ||
          winding_number(d.component_eta(k), d.component_eta(j)[0]) != 0)
        throw Error(Stage::geometry, "curves " + std::to_string(j) + " and " + std::to_string(k) + " are nested");
    }
  }
  return d;
}

Discretization discretization_from_samples(std::size_t n, ComplexGrid eta, ComplexGrid eta_dot,
                                           ComplexGrid eta_ddot) {
  if (n < 4 || n % 2 != 0) throw Error(Stage::geometry, "n must be even and >= 4");
  if (eta.empty() || eta.size() % n != 0 || eta_dot.size() != eta.size() || eta_ddot.size() != eta.size())
    throw Error(Stage::geometry, "sample arrays must have equal length, a multiple of n");
  Discretization d;
  d.n = n;
  d.ell = eta.size() / n;
  d.nodes.resize(eta.size());
  d.component_of.resize(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    d.nodes[i] = kTwoPi * static_cast<double>(i % n) / static_cast<double>(n);
    d.component_of[i] = i / n;
    if (!(std::abs(eta_dot[i]) > 0.0)) throw Error(Stage::geometry, "eta_dot vanishes at a node");
  }
  d.eta = std::move(eta);
  d.eta_dot = std::move(eta_dot);
  d.eta_ddot = std::move(eta_ddot);
  return d;
}

Complex centroid(const Discretization& disc, std::size_t j) {
  if (j >= disc.ell) throw Error(Stage::geometry, "component index out of range");
  Complex sum{};
  for (const Complex& z : disc.component_eta(j)) sum += z;
  return sum / static_cast<double>(disc.n);
}

int winding_number(std::span<const Complex> polyline, Complex point) {
  if (polyline.size() < 3) throw Error(Stage::geometry, "polyline needs at least 3 points");
  double xmin = polyline[0].real(), xmax = xmin, ymin = polyline[0].imag(), ymax = ymin;
  for (const Complex& z : polyline) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const double scale = std::hypot(xmax - xmin, ymax - ymin);
  const double on_curve_tol = 1e-12 * scale;
  double total = 0.0;
  const std::size_t m = polyline.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Complex a = polyline[i];
    const Complex b = polyline[(i + 1) % m];
    if (point_segment_distance(point, a, b) <= on_curve_tol)
      throw Error(Stage::geometry, "point lies on the curve");
    total += std::arg((b - point) / (a - point));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double diameter(std::span<const Complex> samples) {
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) d = std::max(d, std::abs(samples[i] - samples[j]));
  return d;
}

}  // namespace lemniscatic
