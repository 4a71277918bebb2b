#pragma once

#include <algorithm>
#include <cmath>

#include "hvsparse/core.hpp"
#include "hvsparse/prox.hpp"

// Slow reference routines kept as independent checks of the fast paths.
namespace hvsparse::reference {

// Root of psi by bisection on (1e-300 * mu_hi, mu_hi], mu_hi = max x_i^2/(4a),
// where psi(mu_hi) = -1 and psi -> +inf as mu -> 0+.
inline double mu_star_bisection(const DenseVector& x, double alpha_eff) {
  const double xmax = norm_inf(x);
  const double hi0 = xmax * xmax / (4.0 * alpha_eff);
  double lo = 1e-300 * hi0;
  double hi = hi0;
  const double width = 1e-14 * hi0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(x, alpha_eff, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// p_i = lambda_i x_i / (lambda_i + 2a) with lambda_i from the bisection root.
inline DenseVector prox_sql1_bisection(const DenseVector& x, double alpha_eff) {
  DenseVector p(x.size());
  if (norm_inf(x) == 0.0) return p;
  const double mu = mu_star_bisection(x, alpha_eff);
  const double ratio = std::sqrt(alpha_eff) / std::sqrt(mu);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lambda = std::max(ratio * std::abs(x[i]) - 2.0 * alpha_eff, 0.0);
    p[i] = lambda * x[i] / (lambda + 2.0 * alpha_eff);
  }
  return p;
}

}  // namespace hvsparse::reference
