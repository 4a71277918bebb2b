#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hvsparse/core.hpp"
#include "hvsparse/operators.hpp"

namespace hvsparse {

// Fixed-step settings shared by all solvers; the step is t = 1/L.
struct SolverConfig {
  double L = 10.0;
  std::size_t max_iters = 5000;
  double tol = 1e-5;  // on ||x^{k+1} - x^k||_2
  DenseVector x0;     // empty means 0.01 * ones(n)
  // Use alpha itself, not alpha/L, as the parameter of the proximal map
  // (literal reading of H_alpha in the HV iteration).
  bool compat_alpha_mode = false;
  bool record_trace = true;
  std::size_t trace_stride = 1;  // keep every k-th record (the last one is always kept)

  void validate() const;
};

struct IterateRecord {
  std::size_t iteration = 0;  // k of the iterate x^k the record describes
  double objective = 0.0;
  double residual_norm = 0.0;  // ||F(x^k) - y||_2
  double step_norm = 0.0;      // ||x^k - x^{k-1}||_2, 0 for k = 0
  std::optional<double> snr_db;
  std::optional<double> rel_error;
};

struct IterateTrace {
  std::vector<IterateRecord> records;
};

enum class Termination { converged_by_tol, max_iters_reached };

std::string to_string(Termination t);

struct RecoveryResult {
  DenseVector x_star;
  std::size_t iterations = 0;
  Termination termination = Termination::max_iters_reached;
  IterateTrace trace;
  double final_residual = 0.0;
  double final_step = 0.0;
  double stationarity = 0.0;  // ||G_L(x*)||_2
};

// Default starting point 0.01 * ones(n).
DenseVector default_start(std::size_t n);

// One HV iteration:
//   v = x + (2 alpha eta / L) x - (1/L) F'(x)^T (F(x) - y)
//   x+ = prox_{a ||.||_1^2}(v),  a = alpha / L (or alpha in compat mode)
DenseVector hv_step(const NonlinearOperator& op, const DenseVector& x, const DenseVector& y_delta,
                    double alpha, double eta, double L, bool compat = false);

// Iterates hv_step from cfg.x0 until the step drops below tol or max_iters.
// The trace objective is the functional the iteration descends: J_{alpha,eta}
// in default mode, J_{alpha L, eta / L} in compat mode.
RecoveryResult hv_solve(const NonlinearOperator& op, const DenseVector& y_delta, double alpha,
                        double eta, const SolverConfig& cfg,
                        const std::optional<DenseVector>& x_true = std::nullopt);

// x+ = S_{a}(x - (1/L) F'(x)^T (F(x) - y)),  a = alpha / L (alpha in compat mode)
RecoveryResult ista_solve(const NonlinearOperator& op, const DenseVector& y_delta, double alpha,
                          const SolverConfig& cfg,
                          const std::optional<DenseVector>& x_true = std::nullopt);

// Soft thresholding on the gradient step of 0.5||F(x) - y||^2 - beta ||x||_2:
//   x+ = S_{a}(x - (1/L)(F'(x)^T (F(x) - y) - beta x / ||x||_2))
// with the beta term dropped at x = 0. This reconstructs the ST-(alpha l1 -
// beta l2) baseline; beta <= alpha is required.
RecoveryResult stl1l2_solve(const NonlinearOperator& op, const DenseVector& y_delta,
                            double alpha, double beta, const SolverConfig& cfg,
                            const std::optional<DenseVector>& x_true = std::nullopt);

// L * ||x - hv_step(x)||_2
double stationarity_residual(const NonlinearOperator& op, const DenseVector& x,
                             const DenseVector& y_delta, double alpha, double eta, double L,
                             bool compat = false);

}  // namespace hvsparse
