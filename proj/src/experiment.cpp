#include "hvsparse/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "hvsparse/errors.hpp"
#include "hvsparse/operators.hpp"
#include "hvsparse/parallel.hpp"
#include "hvsparse/solvers.hpp"
#include "hvsparse/tuning.hpp"

namespace hvsparse {

// ---- spec -----------------------------------------------------------------

void ExperimentSpec::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("experiment: ") + what);
  };
  need(n >= 1 && m >= 1 && s >= 1, "n, m, s must be >= 1");
  need(m <= n, "m must not exceed n");
  need(s <= m, "s must not exceed m");
  need(scale > 0.0, "scale must be > 0");
  need(!c_values.empty() && !d_values.empty(), "c and d lists must be nonempty");
  for (int c : c_values) need(c >= 1, "c must be >= 1");
  for (int d : d_values) need(d >= 1, "d must be >= 1");
  need(!levels_db.empty(), "noise level list must be nonempty");
  need(!etas.empty(), "eta list must be nonempty");
  for (double e : etas) need(e >= 0.0 && e <= 1.0, "eta must lie in [0, 1]");
  need(!Ls.empty(), "L list must be nonempty");
  for (double L : Ls) need(L > 0.0, "L must be > 0");
  need(!seeds.empty(), "seed list must be nonempty");
  need(!solvers.empty(), "solver list must be nonempty");
  for (const auto& name : solvers) {
    need(name == "hv" || name == "ista" || name == "st", "solvers must be hv, ista or st");
  }
  need(alpha_per_level.empty() || alpha_per_level.size() == levels_db.size(),
       "alpha_per_level must match the noise level list");
  if (alpha_rule == AlphaRule::explicit_value) {
    need(alpha > 0.0, "alpha must be > 0");
    for (double a : alpha_per_level) need(a > 0.0, "alpha must be > 0");
  }
  need(tau >= 1.0, "tau must be >= 1");
  need(kappa > 0.0, "kappa must be > 0");
  need(beta_ratio >= 0.0 && beta_ratio <= 1.0, "beta_ratio must lie in [0, 1]");
  need(max_iters >= 1, "max_iters must be >= 1");
  need(tol > 0.0, "tol must be > 0");
  need(trace_stride >= 1, "trace_stride must be >= 1");
}

double ExperimentSpec::alpha_for_level(std::size_t level_index) const {
  return alpha_per_level.empty() ? alpha : alpha_per_level[level_index];
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"test1", "test2", "test3", "test4",
                                              "test5", "rate",  "custom"};
  return names;
}

ExperimentSpec preset_spec(const std::string& name) {
  ExperimentSpec spec;
  spec.preset = name;
  if (name == "custom" || name == "rate") return spec;

  // Preset alpha values assume the prox parameter alpha rather than alpha / L.
  spec.compat_alpha = true;
  if (name == "test1") {
    spec.etas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  } else if (name == "test2") {
    spec.Ls = {6.0, 8.0, 10.0, 20.0, 50.0, 100.0};
  } else if (name == "test3") {
    spec.levels_db = {50.0, 40.0, 30.0, 20.0, 10.0};
    spec.alpha_per_level = {7.4e-6, 1.2e-5, 5.1e-5, 3.0e-4, 1.9e-3};
    spec.etas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  } else if (name == "test4") {
    spec.c_values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    spec.d_values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else if (name == "test5") {
    spec.solvers = {"hv", "ista", "st"};
  } else {
    throw ParameterError("unknown preset '" + name + "'");
  }
  return spec;
}

// ---- running --------------------------------------------------------------

std::uint64_t hash_vector(const DenseVector& v) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double x : v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

struct GridPoint {
  int c = 0;
  int d = 0;
  std::size_t level = 0;
  double eta = 0.0;
  double L = 0.0;
  std::uint64_t seed = 0;
};

std::vector<GridPoint> enumerate(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  for (int c : spec.c_values)
    for (int d : spec.d_values)
      for (std::size_t li = 0; li < spec.levels_db.size(); ++li)
        for (double eta : spec.etas)
          for (double L : spec.Ls)
            for (std::uint64_t seed : spec.seeds) grid.push_back({c, d, li, eta, L, seed});
  return grid;
}

bool trace_descends(const IterateTrace& trace) {
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const double prev = trace.records[k - 1].objective;
    if (trace.records[k].objective > prev + 1e-10 * (1.0 + std::abs(prev))) return false;
  }
  return true;
}

struct TaskOutput {
  std::vector<ResultRow> rows;
  std::vector<ErrorCurve> curves;
};

TaskOutput run_point(const ExperimentSpec& spec, const GridPoint& pt, bool keep_curves) {
  const double level_db = spec.levels_db[pt.level];
  ResultRow base;
  base.preset = spec.preset;
  base.seed = pt.seed;
  base.n = spec.n;
  base.m = spec.m;
  base.s = spec.s;
  base.c = pt.c;
  base.d = pt.d;
  base.eta = pt.eta;
  base.L = pt.L;
  base.level_db = level_db;

  auto fail_all = [&](const std::string& reason) {
    TaskOutput out;
    for (const auto& name : spec.solvers) {
      ResultRow row = base;
      row.solver = name;
      row.failed = true;
      row.termination = "failed:" + reason;
      out.rows.push_back(row);
    }
    return out;
  };

  const RngSeed seed{pt.seed};
  std::optional<PowerCsOperator> op;
  GaussianInstance inst;
  NoisyData data;
  try {
    inst = gaussian_instance(spec.n, spec.m, spec.s, spec.scale, seed, spec.amplitude);
    op.emplace(inst.A, pt.c, pt.d);
    data = add_noise_db(op->apply(inst.x_true), level_db, derive_seed(seed, 1));
  } catch (const NumericalError& e) {
    return fail_all(e.what());
  }

  SolverConfig cfg;
  cfg.L = pt.L;
  cfg.max_iters = spec.max_iters;
  cfg.tol = spec.tol;
  cfg.x0 = default_start(spec.n);
  cfg.compat_alpha_mode = spec.compat_alpha;
  cfg.record_trace = true;
  cfg.trace_stride = spec.trace_stride;

  double alpha = spec.alpha_for_level(pt.level);
  try {
    if (spec.alpha_rule == AlphaRule::apriori) {
      alpha = apriori_alpha(data.noise_norm, 2.0, spec.kappa);
    } else if (spec.alpha_rule == AlphaRule::discrepancy) {
      DiscrepancyConfig dcfg;
      dcfg.tau = spec.tau;
      dcfg.solver = cfg;
      alpha = discrepancy_search(*op, data.y_delta, data.noise_norm, pt.eta, dcfg).alpha;
    }
  } catch (const NumericalError& e) {
    return fail_all(e.what());
  }
  base.alpha = alpha;

  TaskOutput out;
  const std::uint64_t data_hash = hash_vector(data.y_delta);
  for (const auto& name : spec.solvers) {
    ResultRow row = base;
    row.solver = name;
    row.data_hash = data_hash;
    const auto start = std::chrono::steady_clock::now();
    try {
      RecoveryResult res;
      if (name == "hv") {
        res = hv_solve(*op, data.y_delta, alpha, pt.eta, cfg, inst.x_true);
      } else if (name == "ista") {
        res = ista_solve(*op, data.y_delta, alpha, cfg, inst.x_true);
      } else {
        res = stl1l2_solve(*op, data.y_delta, alpha, spec.beta_ratio * alpha, cfg, inst.x_true);
      }
      row.iterations = res.iterations;
      row.snr_db = snr_db(res.x_star, inst.x_true);
      row.rel_error = relative_error(res.x_star, inst.x_true);
      row.final_residual = res.final_residual;
      row.termination = to_string(res.termination);
      row.support_count = count_above(res.x_star, 1e-6);
      row.descent_ok = trace_descends(res.trace);
      if (keep_curves) {
        ErrorCurve curve{name, pt.seed, {}, {}};
        for (const auto& rec : res.trace.records) {
          curve.iterations.push_back(static_cast<double>(rec.iteration));
          curve.rel_error.push_back(rec.rel_error.value_or(0.0));
        }
        out.curves.push_back(std::move(curve));
      }
    } catch (const NumericalError& e) {
      row.failed = true;
      row.termination = std::string("failed:") + e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    out.rows.push_back(std::move(row));
  }
  return out;
}

TaskOutput run_grid(const ExperimentSpec& spec, bool keep_curves) {
  spec.validate();
  const auto grid = enumerate(spec);
  std::vector<TaskOutput> outputs(grid.size());
  parallel_for(grid.size(), spec.parallel,
               [&](std::size_t i) { outputs[i] = run_point(spec, grid[i], keep_curves); });
  TaskOutput all;
  for (auto& o : outputs) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(all.rows));
    std::move(o.curves.begin(), o.curves.end(), std::back_inserter(all.curves));
  }
  return all;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  return run_grid(spec, false).rows;
}

CompareOutput run_compare(const ExperimentSpec& spec) {
  auto out = run_grid(spec, true);
  return CompareOutput{std::move(out.rows), std::move(out.curves)};
}

// ---- serialization --------------------------------------------------------

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (auto& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_num(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ParameterError("csv: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows, bool include_runtime) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> f{
        sanitize(r.preset),
        std::to_string(r.seed),
        r.solver,
        std::to_string(r.n),
        std::to_string(r.m),
        std::to_string(r.s),
        std::to_string(r.c),
        std::to_string(r.d),
        num(r.eta),
        num(r.L),
        num(r.alpha),
        num(r.level_db),
        r.failed ? "" : std::to_string(r.iterations),
        include_runtime ? num(r.runtime_ms) : "",
        num(r.failed ? nan : r.snr_db),
        num(r.failed ? nan : r.rel_error),
        num(r.failed ? nan : r.final_residual),
        sanitize(r.termination),
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i > 0) out += ',';
      out += f[i];
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("write failed for '" + path + "'");
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  write_file(path, format_csv(rows));
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParameterError("csv: missing or unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 18) throw ParameterError("csv: expected 18 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.preset = f[0];
    r.seed = std::stoull(f[1]);
    r.solver = f[2];
    r.n = std::stoul(f[3]);
    r.m = std::stoul(f[4]);
    r.s = std::stoul(f[5]);
    r.c = std::stoi(f[6]);
    r.d = std::stoi(f[7]);
    r.eta = parse_num(f[8]);
    r.L = parse_num(f[9]);
    r.alpha = parse_num(f[10]);
    r.level_db = parse_num(f[11]);
    r.iterations = f[12].empty() ? 0 : std::stoul(f[12]);
    r.runtime_ms = parse_num(f[13]);
    r.snr_db = parse_num(f[14]);
    r.rel_error = parse_num(f[15]);
    r.final_residual = parse_num(f[16]);
    r.termination = f[17];
    r.failed = r.termination.rfind("failed:", 0) == 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_curves_csv(const std::vector<ErrorCurve>& curves) {
  std::string out = "solver,seed,iteration,rel_error\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.iterations.size(); ++k) {
      out += c.label + ',' + std::to_string(c.seed) + ',' + num(c.iterations[k]) + ',' +
             num(c.rel_error[k]) + '\n';
    }
  }
  return out;
}

std::string format_svg(const std::vector<ErrorCurve>& curves, const std::string& title) {
  constexpr double W = 720, H = 440, left = 70, right = 150, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  double xmax = 1.0, ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  auto logv = [](double v) { return std::log10(std::max(v, 1e-16)); };
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.iterations.size(); ++k) {
      xmax = std::max(xmax, c.iterations[k]);
      ymin = std::min(ymin, logv(c.rel_error[k]));
      ymax = std::max(ymax, logv(c.rel_error[k]));
    }
  }
  if (!std::isfinite(ymin)) ymin = -1.0, ymax = 0.0;
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + pw * x / xmax; };
  auto py = [&](double ly) { return top + ph * (ymax - ly) / (ymax - ymin); };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
    svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(e) << "\" y2=\""
        << py(e) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(e) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">iteration (max "
      << xmax << ")</text>\n";
  svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Rerror</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = palette[i % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.iterations.size(); ++k) {
      if (k > 0) svg << ' ';
      svg << px(c.iterations[k]) << ',' << py(logv(c.rel_error[k]));
    }
    svg << "\"/>\n";
    const double ly = top + 16 + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 36 << "\" y1=\"" << ly
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text class=\"legend\" x=\"" << left + pw + 42 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(const std::vector<ErrorCurve>& curves, const std::string& path,
              const std::string& title) {
  write_file(path, format_svg(curves, title));
}

// ---- JSON config ----------------------------------------------------------

namespace {

template <class T>
std::vector<T> as_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

ExperimentSpec load_spec_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("config: top level must be an object");
  ExperimentSpec spec = preset_spec(j.value("preset", std::string("custom")));
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "preset") continue;
      else if (key == "n") spec.n = v.get<std::size_t>();
      else if (key == "m") spec.m = v.get<std::size_t>();
      else if (key == "sparsity" || key == "s") spec.s = v.get<std::size_t>();
      else if (key == "scale") spec.scale = v.get<double>();
      else if (key == "amplitude") spec.amplitude.scale = v.get<double>();
      else if (key == "amplitude_kind") {
        const auto kind = v.get<std::string>();
        if (kind == "sign") spec.amplitude.kind = AmplitudeKind::random_sign;
        else if (kind == "gaussian") spec.amplitude.kind = AmplitudeKind::gaussian;
        else throw ParameterError("config: amplitude_kind must be sign or gaussian");
      }
      else if (key == "c") spec.c_values = as_list<int>(v);
      else if (key == "d") spec.d_values = as_list<int>(v);
      else if (key == "eta") spec.etas = as_list<double>(v);
      else if (key == "L") spec.Ls = as_list<double>(v);
      else if (key == "snr_db") spec.levels_db = as_list<double>(v);
      else if (key == "alpha") {
        if (v.is_string()) {
          const auto rule = v.get<std::string>();
          if (rule == "discrepancy") spec.alpha_rule = AlphaRule::discrepancy;
          else if (rule == "apriori") spec.alpha_rule = AlphaRule::apriori;
          else throw ParameterError("config: alpha must be a number, discrepancy or apriori");
        } else {
          spec.alpha_rule = AlphaRule::explicit_value;
          spec.alpha = v.get<double>();
          spec.alpha_per_level.clear();
        }
      }
      else if (key == "alpha_per_level") spec.alpha_per_level = as_list<double>(v);
      else if (key == "tau") spec.tau = v.get<double>();
      else if (key == "kappa") spec.kappa = v.get<double>();
      else if (key == "beta_ratio") spec.beta_ratio = v.get<double>();
      else if (key == "seeds") spec.seeds = as_list<std::uint64_t>(v);
      else if (key == "solvers") spec.solvers = as_list<std::string>(v);
      else if (key == "max_iters") spec.max_iters = v.get<std::size_t>();
      else if (key == "tol") spec.tol = v.get<double>();
      else if (key == "compat_alpha") spec.compat_alpha = v.get<bool>();
      else if (key == "parallel") spec.parallel = v.get<bool>();
      else if (key == "trace_stride") spec.trace_stride = v.get<std::size_t>();
      else if (key == "out") spec.out = v.get<std::string>();
      else throw ParameterError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return spec;
}

}  // namespace hvsparse
