#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace lemniscatic {

/// Value with first and second derivative in one scalar variable.
///
/// Curve families are written once as ordinary expressions over Jet and the
/// chain/product rules give exact eta, eta_dot and eta_ddot. T is double or
/// std::complex<double>.
template <class T>
struct Jet {
  T v{};
  T d1{};
  T d2{};

  constexpr Jet() = default;
  constexpr Jet(T value) : v(value) {}  // NOLINT: implicit constants are the point
  constexpr Jet(T value, T first, T second) : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(T x) { return {x, T(1), T(0)}; }

  template <class U>
  explicit operator Jet<U>() const {
    return {U(v), U(d1), U(d2)};
  }
};

template <class T>
constexpr Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
template <class T>
constexpr Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
template <class T>
constexpr Jet<T> operator-(const Jet<T>& a) {
  return {-a.v, -a.d1, -a.d2};
}
template <class T>
constexpr Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}
template <class T>
constexpr Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  const T q = a.v / b.v;
  const T q1 = (a.d1 - q * b.d1) / b.v;
  const T q2 = (a.d2 - T(2) * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}
template <class T>
constexpr Jet<T> operator*(const Jet<T>& a, std::type_identity_t<T> s) {
  return {a.v * s, a.d1 * s, a.d2 * s};
}
template <class T>
constexpr Jet<T> operator*(std::type_identity_t<T> s, const Jet<T>& a) {
  return a * s;
}
template <class T>
constexpr Jet<T> operator+(const Jet<T>& a, std::type_identity_t<T> s) {
  return {a.v + s, a.d1, a.d2};
}
template <class T>
constexpr Jet<T> operator+(std::type_identity_t<T> s, const Jet<T>& a) {
  return a + s;
}
template <class T>
constexpr Jet<T> operator-(const Jet<T>& a, std::type_identity_t<T> s) {
  return {a.v - s, a.d1, a.d2};
}
template <class T>
constexpr Jet<T> operator-(std::type_identity_t<T> s, const Jet<T>& a) {
  return {s - a.v, -a.d1, -a.d2};
}

// Elementary functions: f(g)' = f'(g) g', f(g)'' = f''(g) g'^2 + f'(g) g''.
template <class T>
Jet<T> apply_chain(const Jet<T>& g, T f0, T f1, T f2) {
  return {f0, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2};
}

template <class T>
Jet<T> exp(const Jet<T>& g) {
  using std::exp;
  const T e = exp(g.v);
  return apply_chain(g, e, e, e);
}
template <class T>
Jet<T> sin(const Jet<T>& g) {
  using std::cos;
  using std::sin;
  const T s = sin(g.v);
  return apply_chain(g, s, cos(g.v), -s);
}
template <class T>
Jet<T> cos(const Jet<T>& g) {
  using std::cos;
  using std::sin;
  const T c = cos(g.v);
  return apply_chain(g, c, -sin(g.v), -c);
}
/// Integer power, k >= 0.
template <class T>
Jet<T> pow(const Jet<T>& g, int k) {
  using std::pow;
  if (k == 0) return Jet<T>(T(1));
  if (k == 1) return g;
  const T p2 = pow(g.v, k - 2);
  const T p1 = p2 * g.v;
  return apply_chain(g, p1 * g.v, T(k) * p1, T(k) * T(k - 1) * p2);
}

/// Lift a real jet into the complex plane.
inline Jet<std::complex<double>> to_complex(const Jet<double>& j) {
  return {j.v, j.d1, j.d2};
}

/// Jet of e^{-i t} for t a real jet.
inline Jet<std::complex<double>> exp_minus_i(const Jet<double>& t) {
  const std::complex<double> mi{0.0, -1.0};
  return exp(to_complex(t) * mi);
}

}  // namespace lemniscatic
