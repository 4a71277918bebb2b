#include "hvsparse/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hvsparse/errors.hpp"
#include "hvsparse/regfunc.hpp"

namespace hvsparse {

double int_pow(double t, int k) noexcept {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= t;
  return r;
}

namespace {

const double kLogPowerLimit = std::log(PowerCsOperator::kPowerLimit);

void guard_power(double t, int k, const char* what, std::size_t i) {
  if (!std::isfinite(t)) {
    throw NumericalError(std::string(what) + "[" + std::to_string(i) + "] is not finite");
  }
  if (k > 1 && std::abs(t) > 1.0 && k * std::log(std::abs(t)) > kLogPowerLimit) {
    throw NumericalError(std::string(what) + "[" + std::to_string(i) + "]^" +
                         std::to_string(k) + " exceeds 1e150");
  }
}

}  // namespace

void NonlinearOperator::check_input(const DenseVector& x, const char* what) const {
  if (x.size() != input_dim()) {
    throw ParameterError(std::string(what) + ": expected input length " +
                         std::to_string(input_dim()) + ", got " + std::to_string(x.size()));
  }
}

void NonlinearOperator::check_output(const DenseVector& r, const char* what) const {
  if (r.size() != output_dim()) {
    throw ParameterError(std::string(what) + ": expected output-space length " +
                         std::to_string(output_dim()) + ", got " + std::to_string(r.size()));
  }
}

// ---- LinearOperatorAdapter ------------------------------------------------

LinearOperatorAdapter::LinearOperatorAdapter(DenseMatrix A, kernels::Backend backend)
    : A_(std::move(A)), backend_(backend) {
  if (A_.rows() == 0 || A_.cols() == 0) throw ParameterError("linear operator: empty matrix");
}

DenseVector LinearOperatorAdapter::apply(const DenseVector& x) const {
  check_input(x, "linear apply");
  return kernels::multiply(backend_, A_, x);
}

DenseVector LinearOperatorAdapter::jacobian_apply(const DenseVector& x,
                                                  const DenseVector& u) const {
  check_input(x, "linear jacobian");
  check_input(u, "linear jacobian direction");
  return kernels::multiply(backend_, A_, u);
}

DenseVector LinearOperatorAdapter::jacobian_adjoint_apply(const DenseVector& x,
                                                          const DenseVector& r) const {
  check_input(x, "linear adjoint");
  check_output(r, "linear adjoint");
  return kernels::multiply_transposed(backend_, A_, r);
}

// ---- PowerCsOperator ------------------------------------------------------

PowerCsOperator::PowerCsOperator(DenseMatrix A, int c, int d, kernels::Backend backend)
    : A_(std::move(A)), c_(c), d_(d), backend_(backend) {
  if (A_.rows() == 0 || A_.cols() == 0) throw ParameterError("power operator: empty matrix");
  if (c < 1 || d < 1) throw ParameterError("power operator: exponents must be >= 1");
}

DenseVector PowerCsOperator::inner(const DenseVector& x) const {
  DenseVector b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    guard_power(x[i], d_, "x", i);
    b[i] = x[i] + int_pow(x[i], d_);
  }
  DenseVector z = kernels::multiply(backend_, A_, b);
  for (std::size_t i = 0; i < z.size(); ++i) guard_power(z[i], c_, "z", i);
  return z;
}

DenseVector PowerCsOperator::apply(const DenseVector& x) const {
  check_input(x, "forward");
  DenseVector z = inner(x);
  for (auto& v : z) v += int_pow(v, c_);
  return z;
}

DenseVector PowerCsOperator::jacobian_apply(const DenseVector& x, const DenseVector& u) const {
  check_input(x, "jacobian_apply");
  check_input(u, "jacobian_apply direction");
  const DenseVector z = inner(x);
  DenseVector w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = (1.0 + d_ * int_pow(x[i], d_ - 1)) * u[i];
  }
  DenseVector v = kernels::multiply(backend_, A_, w);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= 1.0 + c_ * int_pow(z[i], c_ - 1);
  return v;
}

DenseVector PowerCsOperator::jacobian_adjoint_apply(const DenseVector& x,
                                                    const DenseVector& r) const {
  check_input(x, "jacobian_adjoint_apply");
  check_output(r, "jacobian_adjoint_apply");
  const DenseVector z = inner(x);
  DenseVector s(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) s[i] = (1.0 + c_ * int_pow(z[i], c_ - 1)) * r[i];
  DenseVector t = kernels::multiply_transposed(backend_, A_, s);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] *= 1.0 + d_ * int_pow(x[i], d_ - 1);
  return t;
}

// ---- checks ---------------------------------------------------------------

JacobianCheckReport fd_jacobian_check(const NonlinearOperator& op, const DenseVector& x, double h,
                                      double tol, std::size_t directions, RngSeed seed) {
  if (!(h > 0.0)) throw ParameterError("fd_jacobian_check: h must be > 0");
  Rng rng(seed);
  JacobianCheckReport report;
  report.directions = directions;
  for (std::size_t k = 0; k < directions; ++k) {
    DenseVector u = rng.normal_vector(x.size());
    u = (1.0 / norm2(u)) * u;
    const DenseVector Ju = op.jacobian_apply(x, u);
    DenseVector xp = x, xm = x;
    axpy(h, u, xp);
    axpy(-h, u, xm);
    DenseVector fd = op.apply(xp) - op.apply(xm);
    fd = (0.5 / h) * fd;
    const double scale = std::max(norm2(Ju), norm2(fd));
    const double dev = scale > 0.0 ? distance2(Ju, fd) / scale : 0.0;
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
  }
  report.passed = report.max_relative_deviation <= tol;
  return report;
}

AdjointCheckReport adjoint_check(const NonlinearOperator& op, const DenseVector& x, double tol,
                                 std::size_t trials, RngSeed seed) {
  Rng rng(seed);
  AdjointCheckReport report;
  report.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const DenseVector u = rng.normal_vector(op.input_dim());
    const DenseVector r = rng.normal_vector(op.output_dim());
    const DenseVector Ju = op.jacobian_apply(x, u);
    const DenseVector JTr = op.jacobian_adjoint_apply(x, r);
    const double lhs = dot(Ju, r);
    const double rhs = dot(u, JTr);
    // Scale by the Cauchy-Schwarz bound so cancellation does not inflate the ratio.
    const double scale = std::max(norm2(Ju) * norm2(r), norm2(u) * norm2(JTr));
    const double dev = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
  }
  report.passed = report.max_relative_deviation <= tol;
  return report;
}

double estimate_smooth_lipschitz(const NonlinearOperator& op, std::span<const DenseVector> probes,
                                 const DenseVector& y_delta, double alpha, double eta) {
  if (probes.size() < 2) throw ParameterError("estimate_smooth_lipschitz: need >= 2 probes");
  std::vector<DenseVector> grads;
  grads.reserve(probes.size());
  for (const auto& p : probes) grads.push_back(smooth_grad(op, p, y_delta, alpha, eta));

  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const double dx = distance2(probes[i], probes[j]);
      if (dx == 0.0) continue;
      any = true;
      best = std::max(best, distance2(grads[i], grads[j]) / dx);
    }
  }
  if (!any) throw ParameterError("estimate_smooth_lipschitz: all probes coincide");
  return best;
}

double spectral_norm_sq(const DenseMatrix& A, std::size_t iterations, RngSeed seed) {
  Rng rng(seed);
  DenseVector v = rng.normal_vector(A.cols());
  double lambda = 0.0;
  for (std::size_t k = 0; k < iterations; ++k) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    v = (1.0 / nv) * v;
    const DenseVector Av = kernels::multiply(kernels::Backend::serial, A, v);
    DenseVector w = kernels::multiply_transposed(kernels::Backend::serial, A, Av);
    lambda = dot(v, w);
    v = std::move(w);
  }
  return lambda;
}

}  // namespace hvsparse
