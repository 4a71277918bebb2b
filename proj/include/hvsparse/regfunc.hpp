#pragma once

#include "hvsparse/core.hpp"
#include "hvsparse/operators.hpp"

namespace hvsparse {

// alpha > 0, 0 <= eta <= 1, q >= 1. eta = 0 is accepted for sweeps and
// diagnostics.
struct RegParams {
  double alpha = 0.0;
  double eta = 1.0;
  double q = 2.0;

  void validate() const;
};

// ||x||_1^2 - eta ||x||_2^2
double reg_value(const DenseVector& x, double eta);

// (1/q) ||F(x) - y||^q + alpha * reg_value(x, eta)
double objective(const NonlinearOperator& op, const DenseVector& x, const DenseVector& y_delta,
                 const RegParams& params);

// Same, reusing an already computed residual norm ||F(x) - y||_2.
double objective_from_residual(double residual_norm, const DenseVector& x,
                               const RegParams& params);

// Gradient of f(x) = 0.5||F(x) - y||^2 - alpha*eta*||x||^2:
//   F'(x)^T (F(x) - y) - 2 alpha eta x
DenseVector smooth_grad(const NonlinearOperator& op, const DenseVector& x,
                        const DenseVector& y_delta, double alpha, double eta);

}  // namespace hvsparse
