#pragma once

#include <vector>

#include "hvsparse/core.hpp"

namespace hvsparse {

// Proximal point of alpha_eff * ||.||_1^2 together with the weights that
// characterize it.
struct ProxSolution {
  DenseVector p;
  double mu_star = 0.0;        // root of psi; 0 when the input is zero
  std::vector<double> lambda;  // lambda_i >= 0, summing to 1 for x != 0
  double threshold = 0.0;      // 2 sqrt(alpha_eff * mu_star)
};

// Optimal weights of the variational form ||x||_1^2 = min sum x_i^2 / lambda_i
// over the simplex: |x_i| / ||x||_1, or 1/n for x = 0.
std::vector<double> lambda_weights(const DenseVector& x);

// psi(mu) = sum_i [sqrt(alpha_eff)|x_i| / sqrt(mu) - 2 alpha_eff]_+ - 1,
// nonincreasing in mu.
double psi(const DenseVector& x, double alpha_eff, double mu);

// Positive root of psi, found exactly from the sorted magnitudes: for the
// support size k with partial sum S_k the root satisfies
//   sqrt(mu) = sqrt(alpha_eff) S_k / (1 + 2 alpha_eff k).
double mu_star(const DenseVector& x, double alpha_eff);

// argmin_u 0.5||u - x||^2 + alpha_eff ||u||_1^2. Equivalent to soft
// thresholding at 2 sqrt(alpha_eff mu*), which is how p is computed.
ProxSolution prox_sql1(const DenseVector& x, double alpha_eff);

// sum_i lambda_i / (2 alpha_eff + lambda_i) x_i e_i; coincides with
// prox_sql1(x, alpha_eff).p.
DenseVector half_variation(const DenseVector& x, double alpha_eff);

// sign(x_i) max(|x_i| - theta, 0)
DenseVector soft_threshold(const DenseVector& x, double theta);

}  // namespace hvsparse
