#include "lemniscatic/kernels.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

namespace lemniscatic {

GridFunction PiecewiseConstant::expand(const Discretization& disc) const {
  if (values.size() != disc.ell) throw Error(Stage::kernels, "piecewise constant has wrong component count");
  GridFunction out(disc.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[disc.component_of[i]];
  return out;
}

GridFunction component_indicator(const Discretization& disc, std::size_t j) {
  PiecewiseConstant e{std::vector<double>(disc.ell, 0.0)};
  e.values.at(j) = 1.0;
  return e.expand(disc);
}

namespace kernels {

namespace {

void check_length(const Discretization& disc, std::size_t len) {
  if (len != disc.size())
    throw Error(Stage::kernels, "grid function length " + std::to_string(len) + " does not match " +
                                    std::to_string(disc.size()) + " nodes");
}

void check_finite(const GridFunction& out) {
  for (double v : out)
    if (!std::isfinite(v)) throw Error(Stage::kernels, "non-finite operator value (coincident nodes?)");
}

// cot(pi d / n) for d = 0..n-1 (entry 0 unused).
std::vector<double> cot_table(std::size_t n) {
  std::vector<double> c(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) c[d] = 1.0 / std::tan(kPi * static_cast<double>(d) / static_cast<double>(n));
  return c;
}

double row_N(const Discretization& disc, std::size_t i, std::span<const double> mu) {
  const Complex zi = disc.eta[i];
  const std::size_t total = disc.size();
  if (disc.graded) {
    // N mu(s) = int N(s,t) (mu(t) - mu(s)) dt - mu(s)
    const double mi = mu[i];
    double sum = 0.0;
    for (std::size_t q = 0; q < total; ++q)
      if (q != i) sum += (disc.eta_dot[q] / (disc.eta[q] - zi)).imag() / kPi * (mu[q] - mi);
    return disc.weight() * sum - mi;
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < total; ++q) {
    double k;
    if (q == i) {
      k = (disc.eta_ddot[i] / disc.eta_dot[i]).imag() / kTwoPi;
    } else {
      k = (disc.eta_dot[q] / (disc.eta[q] - zi)).imag() / kPi;
    }
    sum += k * mu[q];
  }
  return disc.weight() * sum;
}

double row_M_smooth(const Discretization& disc, std::size_t i, std::span<const double> gamma,
                    const std::vector<double>& cot) {
  const Complex zi = disc.eta[i];
  const std::size_t n = disc.n;
  const std::size_t ki = disc.component_of[i];
  const std::size_t pi = i - ki * n;
  const std::size_t total = disc.size();
  // M annihilates constants, so on corner domains gamma(s) is subtracted under the integral.
  const double shift = disc.graded ? gamma[i] : 0.0;
  double sum = 0.0;
  for (std::size_t q = 0; q < total; ++q) {
    double k;
    if (q == i) {
      if (disc.graded) continue;
      k = (disc.eta_ddot[i] / disc.eta_dot[i]).real() / kTwoPi;
    } else {
      k = (disc.eta_dot[q] / (disc.eta[q] - zi)).real() / kPi;
      if (disc.component_of[q] == ki) {
        const std::size_t pq = q - ki * n;
        k += cot[(pi + n - pq) % n] / kTwoPi;
      }
    }
    sum += k * (gamma[q] - shift);
  }
  return disc.weight() * sum;
}

std::vector<GridFunction> conjugate_blocks(const Discretization& disc, std::span<const double> gamma) {
  std::vector<GridFunction> blocks(disc.ell);
  for (std::size_t k = 0; k < disc.ell; ++k) blocks[k] = conjugate_periodic(gamma.subspan(k * disc.n, disc.n));
  return blocks;
}

}  // namespace

double neumann(const Discretization& disc, std::size_t s, std::size_t t) {
  if (s >= disc.size() || t >= disc.size()) throw Error(Stage::kernels, "node index out of range");
  if (s == t) return (disc.eta_ddot[t] / disc.eta_dot[t]).imag() / kTwoPi;
  const Complex diff = disc.eta[t] - disc.eta[s];
  if (diff == Complex{}) throw Error(Stage::kernels, "coincident distinct nodes");
  return (disc.eta_dot[t] / diff).imag() / kPi;
}

double m_smooth(const Discretization& disc, std::size_t s, std::size_t t) {
  if (s >= disc.size() || t >= disc.size()) throw Error(Stage::kernels, "node index out of range");
  if (s == t) return (disc.eta_ddot[t] / disc.eta_dot[t]).real() / kTwoPi;
  const Complex diff = disc.eta[t] - disc.eta[s];
  if (diff == Complex{}) throw Error(Stage::kernels, "coincident distinct nodes");
  double k = (disc.eta_dot[t] / diff).real() / kPi;
  if (disc.component_of[s] == disc.component_of[t]) {
    const double ds = disc.nodes[s] - disc.nodes[t];
    k += 1.0 / (std::tan(0.5 * ds) * kTwoPi);
  }
  return k;
}

GridFunction conjugate_periodic(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2 || n % 2 != 0) throw Error(Stage::kernels, "conjugation needs an even block length");
  Eigen::FFT<double> fft;
  std::vector<double> in(values.begin(), values.end());
  std::vector<Complex> spec;
  fft.fwd(spec, in);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || k == half) {
      spec[k] = 0.0;
    } else if (k < half) {
      spec[k] *= Complex(0.0, -1.0);
    } else {
      spec[k] *= Complex(0.0, 1.0);
    }
  }
  std::vector<Complex> back;
  fft.inv(back, spec);
  GridFunction out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = back[k].real();
  return out;
}

GridFunction apply_N(const Discretization& disc, std::span<const double> mu) {
  check_length(disc, mu.size());
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(disc.size());
  GridFunction out(disc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) out[i] = row_N(disc, static_cast<std::size_t>(i), mu);
  check_finite(out);
  return out;
}

GridFunction apply_M(const Discretization& disc, std::span<const double> gamma) {
  check_length(disc, gamma.size());
  const std::vector<double> cot = cot_table(disc.n);
  const std::vector<GridFunction> conj = conjugate_blocks(disc, gamma);
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(disc.size());
  GridFunction out(disc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const std::size_t k = disc.component_of[u];
    out[u] = row_M_smooth(disc, u, gamma, cot) - conj[k][u - k * disc.n];
  }
  check_finite(out);
  return out;
}

GridFunction apply_I_minus_N(const Discretization& disc, std::span<const double> mu) {
  GridFunction out = apply_N(disc, mu);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mu[i] - out[i];
  return out;
}

namespace serial {

GridFunction apply_N(const Discretization& disc, std::span<const double> mu) {
  check_length(disc, mu.size());
  GridFunction out(disc.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = row_N(disc, i, mu);
  check_finite(out);
  return out;
}

GridFunction apply_M(const Discretization& disc, std::span<const double> gamma) {
  check_length(disc, gamma.size());
  const std::vector<double> cot = cot_table(disc.n);
  const std::vector<GridFunction> conj = conjugate_blocks(disc, gamma);
  GridFunction out(disc.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t k = disc.component_of[i];
    out[i] = row_M_smooth(disc, i, gamma, cot) - conj[k][i - k * disc.n];
  }
  check_finite(out);
  return out;
}

}  // namespace serial

Eigen::MatrixXd assemble_I_minus_N(const Discretization& disc) {
  const std::size_t total = disc.size();
  Eigen::MatrixXd a(total, total);
  const double h = disc.weight();
  for (std::size_t i = 0; i < total; ++i) {
    double off = 0.0;
    for (std::size_t q = 0; q < total; ++q) {
      if (q == i) continue;
      a(i, q) = -h * neumann(disc, i, q);
      off += h * neumann(disc, i, q);
    }
    a(i, i) = disc.graded ? 2.0 + off : 1.0 - h * neumann(disc, i, i);
  }
  return a;
}

}  // namespace kernels
}  // namespace lemniscatic
