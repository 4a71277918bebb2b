#include "hvsparse/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hvsparse/errors.hpp"

namespace hvsparse {

namespace {

void require_positive_alpha(double alpha_eff) {
  if (!(alpha_eff > 0.0) || !std::isfinite(alpha_eff)) {
    throw ParameterError("prox: alpha_eff must be a finite positive number");
  }
}

// Soft threshold 2 alpha S_k / (1 + 2 alpha k) for the true support size k.
double sql1_threshold(const DenseVector& x, double alpha_eff) {
  std::vector<double> mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // The candidate thresholds rise while the sorted magnitude exceeds them
  // and stay above afterwards; the last k with mags[k-1] > theta_k wins.
  double partial = 0.0;
  double theta = 0.0;
  for (std::size_t k = 1; k <= mags.size(); ++k) {
    partial += mags[k - 1];
    const double cand = 2.0 * alpha_eff * partial / (1.0 + 2.0 * alpha_eff * static_cast<double>(k));
    if (mags[k - 1] > cand) {
      theta = cand;
    } else {
      break;
    }
  }
  return theta;
}

}  // namespace

std::vector<double> lambda_weights(const DenseVector& x) {
  const double l1 = norm1(x);
  std::vector<double> w(x.size());
  if (l1 == 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(x.size()));
  } else {
    std::transform(x.begin(), x.end(), w.begin(), [&](double v) { return std::abs(v) / l1; });
  }
  return w;
}

double psi(const DenseVector& x, double alpha_eff, double mu) {
  require_positive_alpha(alpha_eff);
  if (!(mu > 0.0)) throw ParameterError("psi: mu must be > 0");
  const double ratio = std::sqrt(alpha_eff) / std::sqrt(mu);
  double s = 0.0;
  for (double v : x) s += std::max(ratio * std::abs(v) - 2.0 * alpha_eff, 0.0);
  return s - 1.0;
}

double mu_star(const DenseVector& x, double alpha_eff) {
  require_positive_alpha(alpha_eff);
  if (norm_inf(x) == 0.0) {
    throw DegenerateError("mu_star: undefined for x = 0 (prox(0) = 0 by convention)");
  }
  const double theta = sql1_threshold(x, alpha_eff);
  return theta * theta / (4.0 * alpha_eff);
}

ProxSolution prox_sql1(const DenseVector& x, double alpha_eff) {
  require_positive_alpha(alpha_eff);
  ProxSolution sol;
  if (norm_inf(x) == 0.0) {
    sol.p = DenseVector(x.size());
    sol.lambda = lambda_weights(x);
    return sol;
  }
  const double theta = sql1_threshold(x, alpha_eff);
  sol.mu_star = theta * theta / (4.0 * alpha_eff);
  // Rebuilt from mu* so that p is exactly the soft threshold at 2 sqrt(a mu*).
  sol.threshold = 2.0 * std::sqrt(alpha_eff * sol.mu_star);
  sol.p = soft_threshold(x, sol.threshold);

  // sqrt(alpha) |x_i| / sqrt(mu*) - 2 alpha = 2 alpha (|x_i| / theta - 1)
  sol.lambda.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sol.lambda[i] = std::max(2.0 * alpha_eff * (std::abs(x[i]) / sol.threshold - 1.0), 0.0);
  }
  return sol;
}

DenseVector half_variation(const DenseVector& x, double alpha_eff) {
  return prox_sql1(x, alpha_eff).p;
}

DenseVector soft_threshold(const DenseVector& x, double theta) {
  if (!(theta >= 0.0)) throw ParameterError("soft_threshold: theta must be >= 0");
  DenseVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) - theta;
    out[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
  }
  return out;
}

}  // namespace hvsparse
