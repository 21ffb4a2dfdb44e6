#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lemniscatic/common.hpp"
#include "lemniscatic/geometry.hpp"

namespace lemniscatic {

/// Per-component real constants (nu_1, ..., nu_ell).
struct PiecewiseConstant {
  std::vector<double> values;

  GridFunction expand(const Discretization& disc) const;
};

/// Indicator e_j of component j as a grid function.
GridFunction component_indicator(const Discretization& disc, std::size_t j);

namespace kernels {

/// Neumann kernel N(s,t) between nodes s and t, with the continuous diagonal value.
double neumann(const Discretization& disc, std::size_t s, std::size_t t);

/// Kernel M(s,t) for nodes on different components; for nodes on the same
/// component the continuous remainder M1(s,t) = M(s,t) + cot((s-t)/2) / 2pi.
double m_smooth(const Discretization& disc, std::size_t s, std::size_t t);

/// Periodic conjugation H[e^{ikt}] = -i sgn(k) e^{iks} on one equispaced
/// block of even length. The Nyquist mode is annihilated.
GridFunction conjugate_periodic(std::span<const double> values);

// Trapezoidal Nyström products, parallel over output rows.
// On graded (corner) discretizations every row is corrected by singularity
// subtraction: N mu(s) = int N(s,t)(mu(t) - mu(s)) dt - mu(s), and likewise
// M gamma(s) = M[gamma - gamma(s)](s), so both identities on constants hold exactly.
// Each output entry is a sequential sum over q, so results are bitwise
// identical to the serial reference for any thread count.
GridFunction apply_N(const Discretization& disc, std::span<const double> mu);
GridFunction apply_M(const Discretization& disc, std::span<const double> gamma);
/// (I - N) mu
GridFunction apply_I_minus_N(const Discretization& disc, std::span<const double> mu);

namespace serial {
GridFunction apply_N(const Discretization& disc, std::span<const double> mu);
GridFunction apply_M(const Discretization& disc, std::span<const double> gamma);
}  // namespace serial

/// Dense (I - N) matrix. Small instances only (spectrum checks, direct fallback).
Eigen::MatrixXd assemble_I_minus_N(const Discretization& disc);

}  // namespace kernels
}  // namespace lemniscatic
