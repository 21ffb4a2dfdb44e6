#include "lemniscatic/gmres.hpp"

#include <cmath>

#include "lemniscatic/common.hpp"

namespace lemniscatic {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres(const LinearOperator& op, std::span<const double> b, const GmresOptions& options) {
  const std::size_t n = b.size();
  GmresResult result;
  result.x.assign(n, 0.0);

  const double beta = norm2(b);
  if (beta == 0.0) {
    result.converged = true;
    return result;
  }
  if (!std::isfinite(beta)) throw Error(Stage::bie, "GMRES right-hand side is not finite");

  const int m = options.max_iter;
  std::vector<std::vector<double>> basis;
  basis.reserve(m + 1);
  basis.emplace_back(b.begin(), b.end());
  for (double& v : basis[0]) v /= beta;

  // Hessenberg columns, already rotated.
  std::vector<std::vector<double>> h(m);
  std::vector<double> cs(m), sn(m), g(m + 1, 0.0);
  g[0] = beta;

  std::vector<double> w(n);
  int k = 0;
  for (; k < m; ++k) {
    op(basis[k], w);
    std::vector<double>& col = h[k];
    col.assign(k + 2, 0.0);
    for (int j = 0; j <= k; ++j) {
      const double hij = dot(w, basis[j]);
      col[j] = hij;
      for (std::size_t i = 0; i < n; ++i) w[i] -= hij * basis[j][i];
    }
    const double hnext = norm2(w);
    col[k + 1] = hnext;

    for (int j = 0; j < k; ++j) {
      const double t = cs[j] * col[j] + sn[j] * col[j + 1];
      col[j + 1] = -sn[j] * col[j] + cs[j] * col[j + 1];
      col[j] = t;
    }
    const double r = std::hypot(col[k], col[k + 1]);
    cs[k] = col[k] / r;
    sn[k] = col[k + 1] / r;
    col[k] = r;
    col[k + 1] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];

    const double rel = std::abs(g[k + 1]) / beta;
    result.history.push_back(rel);
    result.relres = rel;
    if (rel < options.tol || hnext == 0.0) {
      ++k;
      result.converged = true;
      break;
    }
    basis.emplace_back(w);
    for (double& v : basis.back()) v /= hnext;
  }
  result.iterations = k;

  std::vector<double> y(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= h[j][i] * y[j];
    y[i] = s / h[i][i];
  }
  for (int j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) result.x[i] += y[j] * basis[j][i];

  op(result.x, w);
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) rr += (b[i] - w[i]) * (b[i] - w[i]);
  result.true_relres = std::sqrt(rr) / beta;
  return result;
}

}  // namespace lemniscatic
