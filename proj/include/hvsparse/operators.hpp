#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hvsparse/core.hpp"
#include "hvsparse/kernels.hpp"

namespace hvsparse {

// Differentiable forward model F: R^n -> R^m with its Jacobian action and
// adjoint action. Implementations are immutable after construction.
class NonlinearOperator {
 public:
  virtual ~NonlinearOperator() = default;

  virtual std::size_t input_dim() const noexcept = 0;
  virtual std::size_t output_dim() const noexcept = 0;

  virtual DenseVector apply(const DenseVector& x) const = 0;
  // F'(x) u
  virtual DenseVector jacobian_apply(const DenseVector& x, const DenseVector& u) const = 0;
  // F'(x)^T r
  virtual DenseVector jacobian_adjoint_apply(const DenseVector& x, const DenseVector& r) const = 0;

 protected:
  void check_input(const DenseVector& x, const char* what) const;
  void check_output(const DenseVector& r, const char* what) const;
};

// F(x) = A x.
class LinearOperatorAdapter final : public NonlinearOperator {
 public:
  explicit LinearOperatorAdapter(DenseMatrix A,
                                 kernels::Backend backend = kernels::Backend::serial);

  std::size_t input_dim() const noexcept override { return A_.cols(); }
  std::size_t output_dim() const noexcept override { return A_.rows(); }

  DenseVector apply(const DenseVector& x) const override;
  DenseVector jacobian_apply(const DenseVector& x, const DenseVector& u) const override;
  DenseVector jacobian_adjoint_apply(const DenseVector& x, const DenseVector& r) const override;

  const DenseMatrix& matrix() const noexcept { return A_; }

 private:
  DenseMatrix A_;
  kernels::Backend backend_;
};

// Power-nonlinearity compressed-sensing model
//
//   F(x) = z + z^c,   z = A (x + x^d),
//
// with componentwise integer powers. The Jacobian is
//   F'(x) = (I + diag(c z^{c-1})) A (I + diag(d x^{d-1})).
class PowerCsOperator final : public NonlinearOperator {
 public:
  // Inputs whose power magnitude would exceed this are rejected.
  static constexpr double kPowerLimit = 1e150;

  PowerCsOperator(DenseMatrix A, int c, int d,
                  kernels::Backend backend = kernels::Backend::serial);

  std::size_t input_dim() const noexcept override { return A_.cols(); }
  std::size_t output_dim() const noexcept override { return A_.rows(); }

  DenseVector apply(const DenseVector& x) const override;
  DenseVector jacobian_apply(const DenseVector& x, const DenseVector& u) const override;
  DenseVector jacobian_adjoint_apply(const DenseVector& x, const DenseVector& r) const override;

  const DenseMatrix& matrix() const noexcept { return A_; }
  int c() const noexcept { return c_; }
  int d() const noexcept { return d_; }

 private:
  DenseVector inner(const DenseVector& x) const;  // z = A(x + x^d)

  DenseMatrix A_;
  int c_;
  int d_;
  kernels::Backend backend_;
};

// t^k by repeated multiplication; exact sign for negative t.
double int_pow(double t, int k) noexcept;

struct JacobianCheckReport {
  double max_relative_deviation = 0.0;
  std::size_t directions = 0;
  bool passed = false;
};

// Compares jacobian_apply against central differences (F(x+hu)-F(x-hu))/2h
// along random unit directions.
JacobianCheckReport fd_jacobian_check(const NonlinearOperator& op, const DenseVector& x, double h,
                                      double tol, std::size_t directions = 8,
                                      RngSeed seed = RngSeed{0x5eed});

struct AdjointCheckReport {
  double max_relative_deviation = 0.0;
  std::size_t trials = 0;
  bool passed = false;
};

// <J(x)u, r> against <u, J(x)^T r> on random (u, r) pairs.
AdjointCheckReport adjoint_check(const NonlinearOperator& op, const DenseVector& x, double tol,
                                 std::size_t trials = 8, RngSeed seed = RngSeed{0xad7});

// Maximum secant ratio ||grad f(x_i) - grad f(x_j)|| / ||x_i - x_j|| over all
// probe pairs, for f = 0.5||F(x) - y||^2 - alpha*eta*||x||^2. This is a lower
// bound on the Lipschitz constant of grad f.
double estimate_smooth_lipschitz(const NonlinearOperator& op, std::span<const DenseVector> probes,
                                 const DenseVector& y_delta, double alpha, double eta);

// ||A||_2^2 by power iteration on A^T A.
double spectral_norm_sq(const DenseMatrix& A, std::size_t iterations = 200,
                        RngSeed seed = RngSeed{0x90e4});

}  // namespace hvsparse
