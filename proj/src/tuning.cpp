#include "hvsparse/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hvsparse/errors.hpp"
#include "hvsparse/parallel.hpp"

namespace hvsparse {

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw ParameterError("geometric_grid: need 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

void DiscrepancyConfig::validate() const {
  if (!(tau >= 1.0)) throw ParameterError("discrepancy: tau must be >= 1");
  if (alpha_grid.empty()) throw ParameterError("discrepancy: empty alpha grid");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0) || (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))) {
      throw ParameterError("discrepancy: grid must be positive and strictly increasing");
    }
  }
  solver.validate();
}

namespace {

double band_gap(double residual, double lo, double hi) {
  if (residual < lo) return lo - residual;
  if (residual > hi) return residual - hi;
  return 0.0;
}

}  // namespace

DiscrepancyOutcome discrepancy_search(const NonlinearOperator& op, const DenseVector& y_delta,
                                      double delta_norm, double eta,
                                      const DiscrepancyConfig& cfg) {
  cfg.validate();
  if (!(delta_norm > 0.0)) throw ParameterError("discrepancy: delta must be > 0");
  const double lo = delta_norm;
  const double hi = cfg.tau * delta_norm;
  const std::size_t count = cfg.alpha_grid.size();

  SolverConfig solver = cfg.solver;
  solver.record_trace = false;

  auto evaluate = [&](std::size_t i) {
    return hv_solve(op, y_delta, cfg.alpha_grid[i], eta, solver);
  };

  std::vector<std::optional<RecoveryResult>> results(count);
  if (cfg.parallel) {
    // Full sweep; selection below stays in grid order.
    parallel_for(count, true, [&](std::size_t i) { results[i] = evaluate(i); });
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      results[i] = evaluate(i);
      // Independent re-evaluation rather than the solver's bookkeeping.
      const double res = distance2(op.apply(results[i]->x_star), y_delta);
      if (band_gap(res, lo, hi) == 0.0) break;
    }
  }

  DiscrepancyOutcome best;
  best.band_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    if (!results[i]) continue;
    const double res = distance2(op.apply(results[i]->x_star), y_delta);
    const double gap = band_gap(res, lo, hi);
    if (gap == 0.0) {
      return DiscrepancyOutcome{true, cfg.alpha_grid[i], i, std::move(*results[i]), res, 0.0};
    }
    if (gap < best.band_distance) {
      best.alpha = cfg.alpha_grid[i];
      best.grid_index = i;
      best.residual = res;
      best.band_distance = gap;
      best.result = *results[i];
    }
  }
  return best;
}

double apriori_alpha(double delta_norm, double q, double kappa, double epsilon) {
  if (!(delta_norm > 0.0)) throw ParameterError("apriori_alpha: delta must be > 0");
  if (!(q >= 1.0)) throw ParameterError("apriori_alpha: q must be >= 1");
  if (!(kappa > 0.0)) throw ParameterError("apriori_alpha: kappa must be > 0");
  if (q > 1.0) return kappa * std::pow(delta_norm, q - 1.0);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("apriori_alpha: need 0 < eps < 1");
  return kappa * std::pow(delta_norm, 1.0 - epsilon);
}

SlopeFit fit_loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errors) {
  if (deltas.size() != errors.size() || deltas.size() < 2) {
    throw ParameterError("fit_loglog_slope: need >= 2 paired points");
  }
  const std::size_t k = deltas.size();
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(deltas[i] > 0.0) || !(errors[i] > 0.0)) {
      throw ParameterError("fit_loglog_slope: values must be positive");
    }
    lx[i] = std::log(deltas[i]);
    ly[i] = std::log(errors[i]);
  }
  SlopeFit fit;
  if (std::all_of(errors.begin(), errors.end(), [&](double e) { return e == errors.front(); })) {
    fit.degenerate = true;
    fit.intercept = ly.front();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("fit_loglog_slope: deltas must not all be equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

RateReport rate_study(const RateStudySpec& spec) {
  if (spec.deltas.size() < 3) throw ParameterError("rate_study: need >= 3 noise levels");
  if (spec.seeds.size() < 3) throw ParameterError("rate_study: need >= 3 seeds");

  const std::size_t levels = spec.deltas.size();
  const std::size_t seeds = spec.seeds.size();
  std::vector<double> errors(levels * seeds);

  auto run = [&](std::size_t task) {
    const std::size_t li = task / seeds;
    const std::size_t si = task % seeds;
    const RngSeed seed{spec.seeds[si]};
    auto inst = gaussian_instance(spec.n, spec.m, spec.s, spec.scale, seed);
    LinearOperatorAdapter op(inst.A);
    const DenseVector y = op.apply(inst.x_true);
    const NoisyData data = add_noise_norm(y, spec.deltas[li], derive_seed(seed, 1));
    SolverConfig cfg = spec.solver;
    cfg.record_trace = false;
    if (!(cfg.L > 0.0)) cfg.L = spectral_norm_sq(inst.A);
    const double alpha = apriori_alpha(data.noise_norm, spec.q, spec.kappa);
    const auto res = hv_solve(op, data.y_delta, alpha, spec.eta, cfg);
    errors[task] = distance2(res.x_star, inst.x_true);
  };

  parallel_for(levels * seeds, spec.parallel, run);

  RateReport report;
  std::vector<double> ds, es;
  for (std::size_t li = 0; li < levels; ++li) {
    RatePoint pt;
    pt.delta = spec.deltas[li];
    pt.alpha = apriori_alpha(spec.deltas[li], spec.q, spec.kappa);
    pt.errors.assign(errors.begin() + static_cast<std::ptrdiff_t>(li * seeds),
                     errors.begin() + static_cast<std::ptrdiff_t>((li + 1) * seeds));
    pt.median_error = median(pt.errors);
    ds.push_back(pt.delta);
    es.push_back(pt.median_error);
    report.points.push_back(std::move(pt));
  }
  report.fit = fit_loglog_slope(ds, es);
  return report;
}

}  // namespace hvsparse
