// Command-line harness for the sparse-recovery experiments.
//
//   hvsparse run <preset|config.json> [flags]
//   hvsparse compare [flags]
//   hvsparse rate [flags]
//   hvsparse prox-check [--count N]
//   hvsparse jac-check [--max-exp K]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvsparse/core.hpp"
#include "hvsparse/errors.hpp"
#include "hvsparse/experiment.hpp"
#include "hvsparse/operators.hpp"
#include "hvsparse/prox.hpp"
#include "hvsparse/reference.hpp"
#include "hvsparse/tuning.hpp"

using namespace hvsparse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParam = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::stringstream conv(item);
    T v{};
    conv >> v;
    if (conv.fail() || !conv.eof()) {
      throw ParameterError(std::string(flag) + ": cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError(std::string(flag) + ": empty list");
  return out;
}

// "5" -> 1..5, "3-7" -> 3..7, "2,9,11" -> as listed.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const auto dash = text.find('-');
  if (text.find(',') == std::string::npos && dash == std::string::npos) {
    const auto count = parse_list<std::uint64_t>(text, "--seeds").front();
    if (count == 0) throw ParameterError("--seeds: count must be >= 1");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
    return out;
  }
  if (text.find(',') == std::string::npos) {
    const auto lo = parse_list<std::uint64_t>(text.substr(0, dash), "--seeds").front();
    const auto hi = parse_list<std::uint64_t>(text.substr(dash + 1), "--seeds").front();
    if (hi < lo) throw ParameterError("--seeds: empty range");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  return parse_list<std::uint64_t>(text, "--seeds");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Flags shared by run and compare; each one overrides the preset/config only
// when given.
struct GridFlags {
  std::string n, m, sparsity, c, d, eta, alpha, L, snr_db, seeds, max_iters, tol, tau, out,
      solvers, kappa, beta_ratio;
  bool compat = false;
  bool serial = false;
  CLI::Option* compat_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--n", n, "signal length");
    app.add_option("--m", m, "number of measurements");
    app.add_option("--sparsity", sparsity, "nonzeros in the true signal");
    app.add_option("--c", c, "outer exponent(s), comma separated");
    app.add_option("--d", d, "inner exponent(s), comma separated");
    app.add_option("--eta", eta, "eta value(s) in [0,1]");
    app.add_option("--alpha", alpha, "alpha value(s), or 'discrepancy' / 'apriori'");
    app.add_option("--L", L, "step constant(s)");
    app.add_option("--snr-db", snr_db, "noise level(s) in dB");
    app.add_option("--seeds", seeds, "seed count N (1..N), range a-b, or list");
    app.add_option("--max-iters", max_iters, "iteration cap");
    app.add_option("--tol", tol, "adjacent-iterate stopping threshold");
    app.add_option("--tau", tau, "discrepancy band factor");
    app.add_option("--out", out, "output CSV path");
    app.add_option("--solvers", solvers, "solvers: hv,ista,st");
    app.add_option("--kappa", kappa, "a-priori rule constant");
    app.add_option("--beta-ratio", beta_ratio, "beta/alpha for the st solver");
    compat_opt = app.add_flag("--compat-alpha,!--no-compat-alpha", compat,
                              "use alpha (not alpha/L) in the proximal map");
    app.add_flag("--serial", serial, "run grid points sequentially");
  }

  void apply(ExperimentSpec& spec) const {
    auto one = [](const std::string& s, const char* flag) {
      return parse_list<double>(s, flag).front();
    };
    if (!n.empty()) spec.n = static_cast<std::size_t>(one(n, "--n"));
    if (!m.empty()) spec.m = static_cast<std::size_t>(one(m, "--m"));
    if (!sparsity.empty()) spec.s = static_cast<std::size_t>(one(sparsity, "--sparsity"));
    if (!c.empty()) spec.c_values = parse_list<int>(c, "--c");
    if (!d.empty()) spec.d_values = parse_list<int>(d, "--d");
    if (!eta.empty()) spec.etas = parse_list<double>(eta, "--eta");
    if (!L.empty()) spec.Ls = parse_list<double>(L, "--L");
    if (!snr_db.empty()) {
      spec.levels_db = parse_list<double>(snr_db, "--snr-db");
      if (spec.alpha_per_level.size() != spec.levels_db.size()) spec.alpha_per_level.clear();
    }
    if (!alpha.empty()) {
      if (alpha == "discrepancy") {
        spec.alpha_rule = AlphaRule::discrepancy;
      } else if (alpha == "apriori") {
        spec.alpha_rule = AlphaRule::apriori;
      } else {
        spec.alpha_rule = AlphaRule::explicit_value;
        const auto values = parse_list<double>(alpha, "--alpha");
        spec.alpha = values.front();
        spec.alpha_per_level = values.size() > 1 ? values : std::vector<double>{};
      }
    }
    if (!seeds.empty()) spec.seeds = parse_seeds(seeds);
    if (!max_iters.empty()) spec.max_iters = static_cast<std::size_t>(one(max_iters, "--max-iters"));
    if (!tol.empty()) spec.tol = one(tol, "--tol");
    if (!tau.empty()) spec.tau = one(tau, "--tau");
    if (!out.empty()) spec.out = out;
    if (!solvers.empty()) spec.solvers = parse_list<std::string>(solvers, "--solvers");
    if (!kappa.empty()) spec.kappa = one(kappa, "--kappa");
    if (!beta_ratio.empty()) spec.beta_ratio = one(beta_ratio, "--beta-ratio");
    if (compat_opt->count() > 0) spec.compat_alpha = compat;
    if (serial) spec.parallel = false;
  }
};

ExperimentSpec resolve_target(const std::string& target) {
  if (target.size() > 5 && target.substr(target.size() - 5) == ".json") {
    return load_spec_json(read_file(target));
  }
  return preset_spec(target);
}

void print_summary(const std::vector<ResultRow>& rows) {
  std::size_t failed = 0;
  std::vector<double> snrs;
  for (const auto& r : rows) {
    if (r.failed) {
      ++failed;
    } else {
      snrs.push_back(r.snr_db);
    }
  }
  std::printf("%zu rows, %zu failed", rows.size(), failed);
  if (!snrs.empty()) std::printf(", median SNR %.4f dB", median(snrs));
  std::printf("\n");
}

int rows_exit_code(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows) {
    if (r.failed) return kExitNumerical;
  }
  return kExitOk;
}

std::string with_suffix(const std::string& path, const std::string& suffix,
                        const std::string& ext) {
  const auto dot = path.rfind('.');
  const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
  return stem + suffix + ext;
}

int cmd_prox_check(std::size_t count, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  double worst_oracle = 0.0, worst_opt = 0.0;
  std::size_t threshold_mismatch = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 1 + rng.below(10);
    DenseVector x(n);
    for (auto& v : x) v = rng.uniform(-5.0, 5.0);
    const double alpha = std::pow(10.0, rng.uniform(-4.0, 1.0));
    const ProxSolution sol = prox_sql1(x, alpha);
    const DenseVector oracle = reference::prox_sql1_bisection(x, alpha);
    worst_oracle = std::max(worst_oracle, norm_inf(sol.p - oracle));
    if (!(sol.p == soft_threshold(x, 2.0 * std::sqrt(alpha * sol.mu_star)))) ++threshold_mismatch;
    const double bound = 2.0 * alpha * norm1(sol.p);
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = sol.p[i] != 0.0
                             ? std::abs(x[i] - sol.p[i] - std::copysign(bound, sol.p[i]))
                             : std::max(0.0, std::abs(x[i]) - bound);
      worst_opt = std::max(worst_opt, gap);
    }
  }
  const bool ok = worst_oracle <= 1e-9 && worst_opt <= 1e-8 && threshold_mismatch == 0;
  std::printf("prox-check: %zu vectors, max |sort - bisection| = %.3e, max optimality gap = %.3e, "
              "threshold mismatches = %zu -> %s\n",
              count, worst_oracle, worst_opt, threshold_mismatch, ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitNumerical;
}

int cmd_jac_check(int max_exp, double h, double tol, std::uint64_t seed) {
  bool ok = true;
  Rng rng(RngSeed{seed});
  const std::size_t n = 12, m = 7;
  for (int c = 1; c <= max_exp; ++c) {
    for (int d = 1; d <= max_exp; ++d) {
      DenseMatrix A(m, n);
      for (double& a : A.entries()) a = 0.3 * rng.normal();
      PowerCsOperator op(A, c, d);
      DenseVector x(n);
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);
      const auto fd = fd_jacobian_check(op, x, h, tol, 8, derive_seed(RngSeed{seed}, 10 * c + d));
      const auto adj = adjoint_check(op, x, 1e-10, 8, derive_seed(RngSeed{seed}, 100 + 10 * c + d));
      ok = ok && fd.passed && adj.passed;
      std::printf("c=%d d=%d  fd dev %.3e %s  adjoint dev %.3e %s\n", c, d,
                  fd.max_relative_deviation, fd.passed ? "ok" : "FAIL",
                  adj.max_relative_deviation, adj.passed ? "ok" : "FAIL");
    }
  }
  std::printf("jac-check: %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery with l1^2 - eta*l2^2 regularization"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a preset or JSON config grid");
  std::string target;
  run->add_option("target", target, "preset name or config.json")->required();
  GridFlags run_flags;
  run_flags.attach(*run);

  auto* compare = app.add_subcommand("compare", "compare hv, ista and st on shared data");
  GridFlags cmp_flags;
  cmp_flags.attach(*compare);
  std::string svg_path, traces_path;
  compare->add_option("--svg", svg_path, "Rerror plot path (default <out>_rerror.svg)");
  compare->add_option("--traces", traces_path, "per-iteration CSV (default <out>_traces.csv)");

  auto* rate = app.add_subcommand("rate", "empirical convergence rate with the a-priori rule");
  RateStudySpec rate_spec;
  std::string rate_deltas, rate_seeds, rate_out = "rate.csv";
  rate->add_option("--n", rate_spec.n, "signal length");
  rate->add_option("--m", rate_spec.m, "number of measurements");
  rate->add_option("--sparsity", rate_spec.s, "nonzeros");
  rate->add_option("--eta", rate_spec.eta, "eta in [0,1]");
  rate->add_option("--kappa", rate_spec.kappa, "alpha = kappa * delta");
  rate->add_option("--deltas", rate_deltas, "noise norms, comma separated");
  rate->add_option("--seeds", rate_seeds, "seed count N, range a-b, or list");
  rate->add_option("--max-iters", rate_spec.solver.max_iters, "iteration cap");
  rate->add_option("--tol", rate_spec.solver.tol, "stopping threshold");
  rate->add_option("--out", rate_out, "output CSV path");
  rate_spec.solver.L = 0.0;

  auto* prox_check = app.add_subcommand("prox-check", "sort-based prox against bisection");
  std::size_t prox_count = 1000;
  std::uint64_t prox_seed = 1;
  prox_check->add_option("--count", prox_count, "random vectors");
  prox_check->add_option("--seed", prox_seed, "seed");

  auto* jac_check = app.add_subcommand("jac-check", "Jacobian and adjoint of the power model");
  int max_exp = 5;
  double jac_h = 1e-6, jac_tol = 1e-5;
  std::uint64_t jac_seed = 1;
  jac_check->add_option("--max-exp", max_exp, "largest c and d");
  jac_check->add_option("--step", jac_h, "finite-difference step");
  jac_check->add_option("--tol", jac_tol, "relative tolerance");
  jac_check->add_option("--seed", jac_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParam;
  }

  try {
    if (*run) {
      ExperimentSpec spec = resolve_target(target);
      run_flags.apply(spec);
      const auto rows = run_experiment(spec);
      emit_csv(rows, spec.out);
      print_summary(rows);
      std::printf("wrote %s\n", spec.out.c_str());
      return rows_exit_code(rows);
    }
    if (*compare) {
      ExperimentSpec spec = preset_spec("test5");
      cmp_flags.apply(spec);
      const auto result = run_compare(spec);
      emit_csv(result.rows, spec.out);
      const std::string traces = traces_path.empty() ? with_suffix(spec.out, "_traces", ".csv")
                                                     : traces_path;
      write_file(traces, format_curves_csv(result.curves));
      std::vector<ErrorCurve> first;
      for (const auto& c : result.curves) {
        if (c.seed == spec.seeds.front()) first.push_back(c);
      }
      const std::string svg = svg_path.empty() ? with_suffix(spec.out, "_rerror", ".svg")
                                               : svg_path;
      emit_svg(first, svg, "Rerror vs iteration, seed " + std::to_string(spec.seeds.front()));
      print_summary(result.rows);
      std::printf("wrote %s, %s, %s\n", spec.out.c_str(), traces.c_str(), svg.c_str());
      return rows_exit_code(result.rows);
    }
    if (*rate) {
      if (!rate_deltas.empty()) rate_spec.deltas = parse_list<double>(rate_deltas, "--deltas");
      if (!rate_seeds.empty()) rate_spec.seeds = parse_seeds(rate_seeds);
      rate_spec.parallel = true;
      const auto report = rate_study(rate_spec);
      std::string csv = "delta,alpha,median_error\n";
      for (const auto& p : report.points) {
        char line[128];
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", p.delta, p.alpha, p.median_error);
        csv += line;
        std::printf("delta %.3e  alpha %.3e  median error %.4e\n", p.delta, p.alpha,
                    p.median_error);
      }
      write_file(rate_out, csv);
      std::printf("slope %.4f%s\nwrote %s\n", report.fit.slope,
                  report.fit.degenerate ? " (degenerate fit)" : "", rate_out.c_str());
      return kExitOk;
    }
    if (*prox_check) return cmd_prox_check(prox_count, prox_seed);
    if (*jac_check) return cmd_jac_check(max_exp, jac_h, jac_tol, jac_seed);
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitParam;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParam;
  }
  return kExitOk;
}
