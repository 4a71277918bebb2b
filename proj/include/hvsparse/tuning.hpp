#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hvsparse/core.hpp"
#include "hvsparse/operators.hpp"
#include "hvsparse/solvers.hpp"

namespace hvsparse {

// count geometrically spaced values from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct DiscrepancyConfig {
  double tau = 1.5;
  std::vector<double> alpha_grid = geometric_grid(1e-8, 1e-1, 40);
  SolverConfig solver;
  bool parallel = false;  // evaluate grid points concurrently

  void validate() const;
};

struct DiscrepancyOutcome {
  bool found = false;
  double alpha = 0.0;
  std::size_t grid_index = 0;
  RecoveryResult result;
  double residual = 0.0;  // ||F(x*) - y||_2 of `result`
  // Distance of the residual to [delta, tau*delta]; 0 when found.
  double band_distance = 0.0;
};

// Morozov discrepancy principle over an ascending grid: the first alpha whose
// HV solution satisfies delta <= ||F(x) - y|| <= tau * delta. Without a
// qualifying alpha the outcome is not-found and carries the alpha whose
// residual came closest to the band.
DiscrepancyOutcome discrepancy_search(const NonlinearOperator& op, const DenseVector& y_delta,
                                      double delta_norm, double eta,
                                      const DiscrepancyConfig& cfg);

// kappa * delta^(q-1) for q > 1, kappa * delta^(1-epsilon) for q = 1.
double apriori_alpha(double delta_norm, double q, double kappa, double epsilon = 0.1);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;  // all errors equal, slope reported as 0
};

// Least-squares fit of log(errors) against log(deltas).
SlopeFit fit_loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errors);

struct RateStudySpec {
  std::size_t n = 50;
  std::size_t m = 25;
  std::size_t s = 4;
  double scale = 0.05;
  std::vector<double> deltas{1e-4, 1e-3, 1e-2, 1e-1};
  double eta = 0.5;
  double q = 2.0;
  double kappa = 1.0;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  SolverConfig solver;  // L <= 0 requests ||A||^2
  bool parallel = false;
};

struct RatePoint {
  double delta = 0.0;
  double alpha = 0.0;
  double median_error = 0.0;
  std::vector<double> errors;  // per seed, ||x* - x_true||_2
};

struct RateReport {
  std::vector<RatePoint> points;
  SlopeFit fit;
};

// Empirical convergence rate on linear Gaussian instances with the a-priori
// alpha rule.
RateReport rate_study(const RateStudySpec& spec);

double median(std::vector<double> values);

}  // namespace hvsparse
