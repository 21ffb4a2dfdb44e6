#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lemniscatic {

/// y = A x
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresOptions {
  double tol = 1e-14;  ///< relative residual ||b - Ax|| / ||b||
  int max_iter = 100;
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  double relres = 0.0;       ///< residual estimate from the Hessenberg least-squares problem
  double true_relres = 0.0;  ///< recomputed ||b - Ax|| / ||b||
  bool converged = false;
  std::vector<double> history;  ///< relres estimate after each iteration
};

/// Full (unrestarted), unpreconditioned GMRES from x0 = 0 with modified
/// Gram-Schmidt Arnoldi and Givens rotations. Deterministic: all reductions
/// are sequential.
GmresResult gmres(const LinearOperator& op, std::span<const double> b, const GmresOptions& options = {});

}  // namespace lemniscatic
