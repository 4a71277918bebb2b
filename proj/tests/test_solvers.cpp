#include <cmath>

#include "doctest.h"
#include "hvsparse/errors.hpp"
#include "hvsparse/prox.hpp"
#include "hvsparse/regfunc.hpp"
#include "hvsparse/solvers.hpp"
#include "oracles.hpp"

using namespace hvsparse;

namespace {

LinearOperatorAdapter identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return LinearOperatorAdapter(I);
}

SolverConfig config(double L, double tol = 1e-10, std::size_t max_iters = 10000) {
  SolverConfig cfg;
  cfg.L = L;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  return cfg;
}

}  // namespace

TEST_CASE("1-D problem converges to the grid minimizer") {
  auto op = identity(1);
  const DenseVector y{1.0};
  const double alpha = 0.1, eta = 1.0;
  auto J = [&](double t) { return objective(op, DenseVector{t}, y, RegParams{alpha, eta, 2.0}); };
  const double xmin = oracle::minimize_1d(J, -3.0, 3.0);
  SolverConfig cfg = config(2.0, 1e-5, 5000);
  auto res = hv_solve(op, y, alpha, eta, cfg);
  CHECK(res.termination == Termination::converged_by_tol);
  CHECK(std::abs(res.x_star[0] - xmin) <= 1e-4);
  CHECK(std::abs(res.x_star[0] - 1.0) <= 1e-4);
}

TEST_CASE("2-D convex case converges to the prox of the data") {
  auto op = identity(2);
  const DenseVector y{1.0, 0.0};
  auto res = hv_solve(op, y, 0.1, 0.0, config(2.0), std::nullopt);
  const auto expect = prox_sql1(y, 0.1).p;
  CHECK(std::abs(expect[0] - 1.0 / 1.2) <= 1e-14);
  CHECK(distance2(res.x_star, expect) <= 1e-6);
  CHECK(res.iterations <= 200);
}

TEST_CASE("hv_step examples") {
  auto op = identity(3);
  const DenseVector y{1.0, -0.5, 0.2};
  // fidelity gradient vanishes at x = y
  CHECK(hv_step(op, y, y, 0.3, 0.0, 2.0) == prox_sql1(y, 0.15).p);
  CHECK(hv_step(op, y, y, 0.3, 0.0, 2.0, true) == prox_sql1(y, 0.3).p);
  CHECK(hv_step(op, DenseVector(3, 0.0), DenseVector(3, 0.0), 0.3, 1.0, 2.0) == DenseVector(3, 0.0));
  CHECK_THROWS_AS(hv_step(op, y, y, 0.3, 0.0, 0.0), ParameterError);
}

TEST_CASE("ista closed form") {
  auto op = identity(2);
  auto res = ista_solve(op, DenseVector{1.0, 0.0}, 0.3, config(1.0));
  CHECK(distance2(res.x_star, DenseVector{0.7, 0.0}) <= 1e-12);

  // zero penalty: plain gradient descent on the residual
  auto inst = gaussian_instance(8, 6, 2, 0.3, RngSeed{2});
  LinearOperatorAdapter lin(inst.A);
  const auto y = lin.apply(inst.x_true);
  SolverConfig cfg = config(2.0 * spectral_norm_sq(inst.A), 1e-12, 200);
  auto gd = ista_solve(lin, y, 0.0, cfg);
  const auto& rec = gd.trace.records;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    CHECK(rec[k].residual_norm <= rec[k - 1].residual_norm + 1e-14);
  }
  CHECK(rec.back().residual_norm < rec.front().residual_norm);
}

TEST_CASE("st with beta = 0 reproduces ista bit for bit") {
  auto inst = gaussian_instance(30, 15, 3, 0.05, RngSeed{3});
  PowerCsOperator op(inst.A, 2, 3);
  auto y = op.apply(inst.x_true);
  SolverConfig cfg = config(10.0, 1e-6, 300);
  for (bool compat : {false, true}) {
    cfg.compat_alpha_mode = compat;
    auto a = ista_solve(op, y, 1e-3, cfg, inst.x_true);
    auto b = stl1l2_solve(op, y, 1e-3, 0.0, cfg, inst.x_true);
    CHECK(a.x_star == b.x_star);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
      CHECK(a.trace.records[k].objective == b.trace.records[k].objective);
      CHECK(a.trace.records[k].step_norm == b.trace.records[k].step_norm);
      CHECK(a.trace.records[k].rel_error == b.trace.records[k].rel_error);
    }
  }
  CHECK_THROWS_AS(stl1l2_solve(op, y, 1e-3, 2e-3, cfg), ParameterError);
}

TEST_CASE("zero is a fixed point for every solver") {
  auto inst = gaussian_instance(20, 10, 3, 0.3, RngSeed{4});
  PowerCsOperator op(inst.A, 2, 3);
  const auto y = op.apply(DenseVector(20, 0.0));
  SolverConfig cfg = config(10.0, 1e-5, 100);
  cfg.x0 = DenseVector(20, 0.0);
  for (const auto& res : {hv_solve(op, y, 1e-3, 1.0, cfg), ista_solve(op, y, 1e-3, cfg),
                          stl1l2_solve(op, y, 1e-3, 1e-3, cfg)}) {
    CHECK(res.x_star == DenseVector(20, 0.0));
    CHECK(res.iterations == 1);
    CHECK(res.termination == Termination::converged_by_tol);
    CHECK(res.x_star.all_finite());
  }
}

TEST_CASE("st handles a zero iterate without dividing by zero") {
  auto op = identity(2);
  SolverConfig cfg = config(1.0, 1e-10, 50);
  cfg.x0 = DenseVector(2, 0.0);
  auto res = stl1l2_solve(op, DenseVector{1.0, 0.1}, 0.3, 0.3, cfg);
  CHECK(res.x_star.all_finite());
  CHECK(res.x_star[0] > 0.0);
  CHECK(res.x_star[1] == 0.0);
}

TEST_CASE("stationarity residual") {
  auto op = identity(1);
  const DenseVector y{1.0};
  const double alpha = 0.1;
  // eta = 0 in 1-D: J = 0.5 (x - 1)^2 + 0.1 x^2, a convex problem
  auto J = [&](double t) { return objective(op, DenseVector{t}, y, RegParams{alpha, 0.0, 2.0}); };
  const double xmin = oracle::minimize_1d(J, -3.0, 3.0);
  CHECK(std::abs(xmin - 1.0 / 1.2) <= 1e-8);
  CHECK(stationarity_residual(op, DenseVector{xmin}, y, alpha, 0.0, 2.0) <= 1e-8);
  CHECK(stationarity_residual(op, DenseVector{-2.0}, y, alpha, 0.0, 2.0) > 0.1);

  auto inst = gaussian_instance(30, 15, 3, 0.05, RngSeed{5});
  PowerCsOperator pop(inst.A, 2, 3);
  auto res = hv_solve(pop, pop.apply(inst.x_true), 1e-3, 0.5, config(10.0, 1e-7, 20000));
  REQUIRE(res.termination == Termination::converged_by_tol);
  CHECK(res.stationarity <= 10.0 * 1e-7);
  CHECK(res.stationarity ==
        doctest::Approx(stationarity_residual(pop, res.x_star, pop.apply(inst.x_true), 1e-3, 0.5,
                                              10.0))
            .epsilon(1e-12));
}

TEST_CASE("termination semantics and trace layout") {
  auto inst = gaussian_instance(40, 20, 4, 0.05, RngSeed{6});
  PowerCsOperator op(inst.A, 2, 3);
  auto y = op.apply(inst.x_true);
  SolverConfig cfg = config(10.0, 1e-5, 7);
  auto capped = hv_solve(op, y, 1e-4, 1.0, cfg, inst.x_true);
  CHECK(capped.termination == Termination::max_iters_reached);
  CHECK(capped.iterations == 7);
  CHECK(capped.trace.records.front().iteration == 0);
  CHECK(capped.trace.records.back().iteration == 7);
  CHECK(capped.trace.records.back().snr_db.has_value());

  cfg.max_iters = 20000;
  auto done = hv_solve(op, y, 1e-4, 1.0, cfg);
  CHECK(done.termination == Termination::converged_by_tol);
  CHECK(done.final_step < cfg.tol);

  cfg.trace_stride = 10;
  auto thin = hv_solve(op, y, 1e-4, 1.0, cfg);
  CHECK(thin.x_star == done.x_star);
  CHECK(thin.trace.records.size() < done.trace.records.size());
  CHECK(thin.trace.records.back().iteration == done.iterations);

  cfg.record_trace = false;
  CHECK(hv_solve(op, y, 1e-4, 1.0, cfg).x_star == done.x_star);

  SolverConfig bad = config(10.0);
  bad.tol = 0.0;
  CHECK_THROWS_AS(hv_solve(op, y, 1e-4, 1.0, bad), ParameterError);
  CHECK_THROWS_AS(hv_solve(op, y, 0.0, 1.0, config(10.0)), ParameterError);
}

TEST_CASE("overflow surfaces as a numerical error") {
  DenseMatrix A(1, 1, std::vector<double>{1.0});
  PowerCsOperator op(A, 9, 9);
  SolverConfig cfg = config(1e-3, 1e-5, 100);
  CHECK_THROWS_AS(hv_solve(op, DenseVector{1e3}, 1e-3, 1.0, cfg), NumericalError);
}

TEST_CASE("descent and sufficient decrease on small instances") {
  Rng rng(RngSeed{7});
  for (int t = 0; t < 12; ++t) {
    const auto seed = RngSeed{static_cast<std::uint64_t>(200 + t)};
    auto inst = gaussian_instance(20, 10, 3, 0.05, seed);
    PowerCsOperator op(inst.A, (t % 2) ? 3 : 2, 3);
    auto y = add_noise_db(op.apply(inst.x_true), 30.0, derive_seed(seed, 1)).y_delta;
    const double alpha = 1e-3 * (1 + t), eta = rng.uniform();

    // collect the trajectory with a generous step constant, then estimate L_f on it
    const double L = 20.0;
    std::vector<DenseVector> xs{default_start(20)};
    for (int k = 0; k < 300; ++k) xs.push_back(hv_step(op, xs.back(), y, alpha, eta, L));
    std::vector<DenseVector> probes = xs;
    probes.push_back(inst.x_true);
    const double Lf = estimate_smooth_lipschitz(op, probes, y, alpha, eta);
    REQUIRE(L > Lf / 2.0);

    const RegParams p{alpha, eta, 2.0};
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double Jk = objective(op, xs[k], y, p);
      const double Jn = objective(op, xs[k + 1], y, p);
      CHECK(Jn <= Jk + 1e-10 * (1.0 + std::abs(Jk)));
      const double G2 = L * L * norm2_sq(xs[k] - xs[k + 1]);
      CHECK(Jk - Jn >= (L - Lf / 2.0) / (L * L) * G2 - 1e-8);
    }

    SolverConfig cfg = config(L, 1e-5, 300);
    auto res = hv_solve(op, y, alpha, eta, cfg);
    const auto& rec = res.trace.records;
    for (std::size_t k = 1; k < rec.size(); ++k) {
      CHECK(rec[k].objective <= rec[k - 1].objective + 1e-10 * (1.0 + std::abs(rec[k - 1].objective)));
    }
  }
}

TEST_CASE("vanishing steps in the convex case") {
  for (int t = 0; t < 5; ++t) {
    auto inst = gaussian_instance(30, 15, 3, 0.05, RngSeed{static_cast<std::uint64_t>(300 + t)});
    LinearOperatorAdapter op(inst.A);
    auto y = add_noise_db(op.apply(inst.x_true), 30.0, RngSeed{9}).y_delta;
    SolverConfig cfg = config(spectral_norm_sq(inst.A), 1e-5, 10000);
    auto res = hv_solve(op, y, 1e-3, 0.0, cfg);
    CHECK(res.termination == Termination::converged_by_tol);
    CHECK(res.trace.records.back().step_norm < cfg.tol);
  }
}

TEST_CASE("compat mode equals the default mode with rescaled parameters") {
  auto inst = gaussian_instance(30, 15, 3, 0.05, RngSeed{10});
  PowerCsOperator op(inst.A, 2, 3);
  auto y = op.apply(inst.x_true);
  Rng rng(RngSeed{11});
  const double alpha = 1e-3, eta = 0.7, L = 10.0;
  for (int t = 0; t < 20; ++t) {
    auto x = 0.3 * rng.normal_vector(30);
    auto a = hv_step(op, x, y, alpha, eta, L, true);
    auto b = hv_step(op, x, y, alpha * L, eta / L, L, false);
    CHECK(distance2(a, b) <= 1e-14 * std::max(1.0, norm2(a)));
  }
}
