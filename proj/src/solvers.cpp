#include "hvsparse/solvers.hpp"

#include <cmath>
#include <string>

#include "hvsparse/errors.hpp"
#include "hvsparse/prox.hpp"
#include "hvsparse/regfunc.hpp"

namespace hvsparse {

void SolverConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ParameterError("solver: L must be > 0");
  if (max_iters < 1) throw ParameterError("solver: max_iters must be >= 1");
  if (!(tol > 0.0)) throw ParameterError("solver: tol must be > 0");
  if (trace_stride < 1) throw ParameterError("solver: trace_stride must be >= 1");
  if (!x0.empty() && !x0.all_finite()) throw ParameterError("solver: x0 must be finite");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged_by_tol:
      return "converged_by_tol";
    case Termination::max_iters_reached:
      return "max_iters_reached";
  }
  return "unknown";
}

DenseVector default_start(std::size_t n) { return DenseVector(n, 0.01); }

namespace {

void require_finite(const DenseVector& v, const char* what) {
  if (!v.all_finite()) throw NumericalError(std::string("non-finite ") + what);
}

void check_problem(const NonlinearOperator& op, const DenseVector& y_delta,
                   const SolverConfig& cfg, const std::optional<DenseVector>& x_true) {
  cfg.validate();
  if (y_delta.size() != op.output_dim()) throw ParameterError("solver: data length mismatch");
  if (!cfg.x0.empty() && cfg.x0.size() != op.input_dim()) {
    throw ParameterError("solver: x0 length mismatch");
  }
  if (x_true && x_true->size() != op.input_dim()) {
    throw ParameterError("solver: x_true length mismatch");
  }
}

void check_alpha(double alpha, bool allow_zero) {
  if (!(allow_zero ? alpha >= 0.0 : alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError(allow_zero ? "alpha must be >= 0" : "alpha must be > 0");
  }
}

// Residual r = F(x) - y at the current iterate.
DenseVector residual(const NonlinearOperator& op, const DenseVector& x, const DenseVector& y) {
  DenseVector r = op.apply(x) - y;
  require_finite(r, "forward residual");
  return r;
}

// Shared fixed-step loop. `step(x, grad)` maps the iterate and the data-term
// gradient F'(x)^T r to the next iterate; `objective(res_norm, x)` evaluates
// the functional the step descends.
template <class Step, class Objective>
RecoveryResult iterate(const NonlinearOperator& op, const DenseVector& y_delta,
                       const SolverConfig& cfg, const std::optional<DenseVector>& x_true,
                       Step&& step, Objective&& objective) {
  RecoveryResult out;
  DenseVector x = cfg.x0.empty() ? default_start(op.input_dim()) : cfg.x0;

  auto record = [&](std::size_t k, double res_norm, double step_norm) {
    IterateRecord rec;
    rec.iteration = k;
    rec.objective = objective(res_norm, x);
    rec.residual_norm = res_norm;
    rec.step_norm = step_norm;
    if (x_true) {
      rec.snr_db = snr_db(x, *x_true);
      rec.rel_error = relative_error(x, *x_true);
    }
    out.trace.records.push_back(rec);
  };

  std::size_t k = 0;
  double last_step = 0.0;
  DenseVector r = residual(op, x, y_delta);
  while (true) {
    if (cfg.record_trace && k % cfg.trace_stride == 0) record(k, norm2(r), last_step);

    DenseVector grad = op.jacobian_adjoint_apply(x, r);
    require_finite(grad, "gradient");
    DenseVector next = step(x, grad);
    require_finite(next, "iterate");
    last_step = distance2(next, x);
    x = std::move(next);
    ++k;
    r = residual(op, x, y_delta);

    if (last_step < cfg.tol) {
      out.termination = Termination::converged_by_tol;
      break;
    }
    if (k >= cfg.max_iters) {
      out.termination = Termination::max_iters_reached;
      break;
    }
  }
  out.final_residual = norm2(r);
  if (cfg.record_trace) record(k, out.final_residual, last_step);

  DenseVector grad = op.jacobian_adjoint_apply(x, r);
  require_finite(grad, "gradient");
  out.stationarity = cfg.L * distance2(step(x, grad), x);
  out.iterations = k;
  out.final_step = last_step;
  out.x_star = std::move(x);
  return out;
}

// v = x + (2 alpha eta / L) x - (1/L) grad,  then prox.
DenseVector hv_update(const DenseVector& x, const DenseVector& grad, double alpha, double eta,
                      double L, bool compat) {
  const double keep = 1.0 + 2.0 * alpha * eta / L;
  DenseVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = keep * x[i] - grad[i] / L;
  require_finite(v, "proximal input");
  return prox_sql1(v, compat ? alpha : alpha / L).p;
}

}  // namespace

DenseVector hv_step(const NonlinearOperator& op, const DenseVector& x, const DenseVector& y_delta,
                    double alpha, double eta, double L, bool compat) {
  check_alpha(alpha, false);
  if (!(L > 0.0)) throw ParameterError("hv_step: L must be > 0");
  if (y_delta.size() != op.output_dim()) throw ParameterError("hv_step: data length mismatch");
  const DenseVector r = residual(op, x, y_delta);
  DenseVector grad = op.jacobian_adjoint_apply(x, r);
  require_finite(grad, "gradient");
  return hv_update(x, grad, alpha, eta, L, compat);
}

RecoveryResult hv_solve(const NonlinearOperator& op, const DenseVector& y_delta, double alpha,
                        double eta, const SolverConfig& cfg,
                        const std::optional<DenseVector>& x_true) {
  check_problem(op, y_delta, cfg, x_true);
  check_alpha(alpha, false);
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("hv_solve: eta must lie in [0, 1]");
  const double L = cfg.L;
  const bool compat = cfg.compat_alpha_mode;
  const RegParams params = compat ? RegParams{alpha * L, eta / L, 2.0} : RegParams{alpha, eta, 2.0};
  return iterate(
      op, y_delta, cfg, x_true,
      [&](const DenseVector& x, const DenseVector& grad) {
        return hv_update(x, grad, alpha, eta, L, compat);
      },
      [&](double res, const DenseVector& x) { return objective_from_residual(res, x, params); });
}

RecoveryResult ista_solve(const NonlinearOperator& op, const DenseVector& y_delta, double alpha,
                          const SolverConfig& cfg, const std::optional<DenseVector>& x_true) {
  return stl1l2_solve(op, y_delta, alpha, 0.0, cfg, x_true);
}

RecoveryResult stl1l2_solve(const NonlinearOperator& op, const DenseVector& y_delta,
                            double alpha, double beta, const SolverConfig& cfg,
                            const std::optional<DenseVector>& x_true) {
  check_problem(op, y_delta, cfg, x_true);
  check_alpha(alpha, true);
  if (!(beta >= 0.0) || beta > alpha) throw ParameterError("stl1l2: need 0 <= beta <= alpha");
  const double L = cfg.L;
  const double theta = cfg.compat_alpha_mode ? alpha : alpha / L;
  const double l1_weight = theta * L;
  return iterate(
      op, y_delta, cfg, x_true,
      [&](const DenseVector& x, const DenseVector& grad) {
        DenseVector v(x.size());
        const double nx = norm2(x);
        const double pull = (beta > 0.0 && nx > 0.0) ? beta / nx : 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i] - (grad[i] - pull * x[i]) / L;
        return soft_threshold(v, theta);
      },
      [&](double res, const DenseVector& x) {
        return 0.5 * res * res + l1_weight * norm1(x) - beta * norm2(x);
      });
}

double stationarity_residual(const NonlinearOperator& op, const DenseVector& x,
                             const DenseVector& y_delta, double alpha, double eta, double L,
                             bool compat) {
  return L * distance2(x, hv_step(op, x, y_delta, alpha, eta, L, compat));
}

}  // namespace hvsparse
