#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvsparse/core.hpp"

namespace hvsparse {

enum class AlphaRule { explicit_value, discrepancy, apriori };

// One experiment grid: every (c, d) x noise level x eta x L x seed x solver
// combination is solved once.
struct ExperimentSpec {
  std::string preset = "custom";
  std::size_t n = 200;
  std::size_t m = 80;
  std::size_t s = 16;
  double scale = 0.05;
  SignalAmplitude amplitude;
  std::vector<int> c_values{2};
  std::vector<int> d_values{3};
  std::vector<double> levels_db{30.0};
  std::vector<double> etas{1.0};
  std::vector<double> Ls{10.0};
  AlphaRule alpha_rule = AlphaRule::explicit_value;
  double alpha = 5.1e-5;
  // Per noise level override of `alpha`; empty or same length as levels_db.
  std::vector<double> alpha_per_level;
  double tau = 1.5;     // discrepancy rule
  double kappa = 1.0;   // a-priori rule
  double beta_ratio = 1.0;  // beta = beta_ratio * alpha for the st solver
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::string> solvers{"hv"};
  std::size_t max_iters = 5000;
  double tol = 1e-5;
  bool compat_alpha = false;
  bool parallel = true;
  std::size_t trace_stride = 1;
  std::string out = "results.csv";

  void validate() const;
  double alpha_for_level(std::size_t level_index) const;
};

// Named grids reproducing the numerical study: test1 (eta sweep), test2 (L
// sweep), test3 (noise levels), test4 (exponents c, d), test5 (solver
// comparison), rate, custom.
ExperimentSpec preset_spec(const std::string& name);

const std::vector<std::string>& preset_names();

struct ResultRow {
  std::string preset;
  std::uint64_t seed = 0;
  std::string solver;
  std::size_t n = 0, m = 0, s = 0;
  int c = 0, d = 0;
  double eta = 0.0;
  double L = 0.0;
  double alpha = 0.0;
  double level_db = 0.0;
  std::size_t iterations = 0;
  double runtime_ms = 0.0;
  double snr_db = 0.0;
  double rel_error = 0.0;
  double final_residual = 0.0;
  std::string termination;
  bool failed = false;

  // not serialized
  std::size_t support_count = 0;  // entries of x* above 1e-6
  bool descent_ok = true;         // trace objective nonincreasing
  std::uint64_t data_hash = 0;    // hash of the y_delta consumed
};

struct ErrorCurve {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<double> iterations;
  std::vector<double> rel_error;
};

struct CompareOutput {
  std::vector<ResultRow> rows;
  std::vector<ErrorCurve> curves;  // one per (seed, solver)
};

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// Runs every solver on the same (instance, noise) realization and keeps the
// relative-error history of each run.
CompareOutput run_compare(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "preset,seed,solver,n,m,s,c,d,eta,L,alpha,level_db,iterations,runtime_ms,snr_db,rel_error,"
    "final_residual,termination";

std::string format_csv(const std::vector<ResultRow>& rows, bool include_runtime = true);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(const std::string& text);

std::string format_svg(const std::vector<ErrorCurve>& curves, const std::string& title = "");
void emit_svg(const std::vector<ErrorCurve>& curves, const std::string& path,
              const std::string& title = "");

std::string format_curves_csv(const std::vector<ErrorCurve>& curves);

// Writes text to path, raising IoError on failure.
void write_file(const std::string& path, const std::string& text);

// FNV-1a over the raw bytes of the vector.
std::uint64_t hash_vector(const DenseVector& v) noexcept;

// Loads a JSON mirror of the CLI flags on top of its "preset" (default custom).
ExperimentSpec load_spec_json(const std::string& json_text);

}  // namespace hvsparse
