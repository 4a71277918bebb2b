#include "hvsparse/regfunc.hpp"

#include <cmath>

#include "hvsparse/errors.hpp"

namespace hvsparse {

void RegParams::validate() const {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0, 1]");
  if (!(q >= 1.0)) throw ParameterError("q must be >= 1");
}

double reg_value(const DenseVector& x, double eta) {
  const double l1 = norm1(x);
  return l1 * l1 - eta * norm2_sq(x);
}

double objective_from_residual(double residual_norm, const DenseVector& x,
                               const RegParams& params) {
  const double fidelity = params.q == 2.0 ? 0.5 * residual_norm * residual_norm
                                          : std::pow(residual_norm, params.q) / params.q;
  return fidelity + params.alpha * reg_value(x, params.eta);
}

double objective(const NonlinearOperator& op, const DenseVector& x, const DenseVector& y_delta,
                 const RegParams& params) {
  params.validate();
  if (y_delta.size() != op.output_dim()) throw ParameterError("objective: data length mismatch");
  const DenseVector Fx = op.apply(x);
  return objective_from_residual(distance2(Fx, y_delta), x, params);
}

DenseVector smooth_grad(const NonlinearOperator& op, const DenseVector& x,
                        const DenseVector& y_delta, double alpha, double eta) {
  if (y_delta.size() != op.output_dim()) {
    throw ParameterError("smooth_grad: data length mismatch");
  }
  DenseVector grad = op.jacobian_adjoint_apply(x, op.apply(x) - y_delta);
  axpy(-2.0 * alpha * eta, x, grad);
  return grad;
}

}  // namespace hvsparse
