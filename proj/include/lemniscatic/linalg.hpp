#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lemniscatic {

/// Gaussian elimination with partial pivoting for small dense systems.
/// Returns nullopt when a pivot falls below rel_pivot_tol * max|A_ij|.
template <class Scalar>
std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> solve_small(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b,
    double rel_pivot_tol = 1e-14) {
  const Eigen::Index n = a.rows();
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (!(best > rel_pivot_tol * scale)) return std::nullopt;
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(b(k), b(piv));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Scalar f = a(i, k) / a(k, k);
      a(i, k) = Scalar(0);
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b(i) -= f * b(k);
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Scalar s = b(i);
    for (Eigen::Index j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
    x(i) = s / a(i, i);
  }
  return x;
}

}  // namespace lemniscatic
