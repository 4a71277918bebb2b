#include "hvsparse/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hvsparse/errors.hpp"

namespace hvsparse {

bool DenseVector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ParameterError("matrix entries: expected " + std::to_string(rows * cols) +
                         ", got " + std::to_string(data_.size()));
  }
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_size(const DenseVector& a, const DenseVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw ParameterError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm1(const DenseVector& x) noexcept {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm2_sq(const DenseVector& x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double norm2(const DenseVector& x) noexcept { return std::sqrt(norm2_sq(x)); }

double norm_inf(const DenseVector& x) noexcept {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double distance2(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "vector sum");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "vector difference");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

DenseVector operator-(const DenseVector& a) {
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

DenseVector operator*(double t, const DenseVector& a) {
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = t * a[i];
  return out;
}

void axpy(double t, const DenseVector& x, DenseVector& y) {
  require_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

std::size_t count_above(const DenseVector& x, double threshold) noexcept {
  return static_cast<std::size_t>(
      std::count_if(x.begin(), x.end(), [&](double v) { return std::abs(v) > threshold; }));
}

// ---- randomness -----------------------------------------------------------

RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = base.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return RngSeed{z ^ (z >> 31)};
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_ = true;
  return u * f;
}

std::size_t Rng::below(std::size_t n) {
  // Lemire's nearly-divisionless rejection keeps the draw unbiased.
  const std::uint64_t bound = n;
  unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(prod);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      prod = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::size_t>(prod >> 64);
}

DenseVector Rng::normal_vector(std::size_t n) {
  DenseVector out(n);
  for (auto& v : out) v = normal();
  return out;
}

// ---- instances and noise --------------------------------------------------

GaussianInstance gaussian_instance(std::size_t n, std::size_t m, std::size_t s, double scale,
                                   RngSeed seed, SignalAmplitude amplitude) {
  if (n == 0 || m == 0) throw ParameterError("gaussian_instance: n and m must be >= 1");
  if (s == 0 || s > n) throw ParameterError("gaussian_instance: need 1 <= s <= n");
  if (!(scale > 0.0)) throw ParameterError("gaussian_instance: scale must be > 0");
  if (!(amplitude.scale > 0.0)) throw ParameterError("gaussian_instance: amplitude must be > 0");

  Rng rng(seed);
  GaussianInstance inst{DenseMatrix(m, n), DenseVector(n)};
  for (double& a : inst.A.entries()) a = scale * rng.normal();

  // Partial Fisher-Yates: the first s slots become the support.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t j = k + rng.below(n - k);
    std::swap(idx[k], idx[j]);
  }
  for (std::size_t k = 0; k < s; ++k) {
    double v = 0.0;
    switch (amplitude.kind) {
      case AmplitudeKind::random_sign:
        v = amplitude.scale * rng.sign();
        break;
      case AmplitudeKind::gaussian:
        // a zero draw would break the exact-sparsity contract
        do {
          v = amplitude.scale * rng.normal();
        } while (v == 0.0);
        break;
    }
    inst.x_true[idx[k]] = v;
  }
  return inst;
}

namespace {

NoisyData finish_noise(const DenseVector& y, DenseVector e, double level_db) {
  NoisyData out{y + e, 0.0, level_db};
  out.noise_norm = distance2(out.y_delta, y);
  return out;
}

}  // namespace

NoisyData add_noise_db(const DenseVector& y, double level_db, RngSeed seed) {
  const double power = norm2_sq(y);
  if (!(power > 0.0)) throw DegenerateError("add_noise_db: signal is zero");
  const double sigma =
      std::sqrt(power / (static_cast<double>(y.size()) * std::pow(10.0, level_db / 10.0)));
  Rng rng(seed);
  DenseVector e = rng.normal_vector(y.size());
  for (auto& v : e) v *= sigma;
  return finish_noise(y, std::move(e), level_db);
}

NoisyData add_noise_norm(const DenseVector& y, double noise_norm, RngSeed seed) {
  if (!(noise_norm >= 0.0)) throw ParameterError("add_noise_norm: norm must be >= 0");
  const double power = norm2_sq(y);
  if (!(power > 0.0)) throw DegenerateError("add_noise_norm: signal is zero");
  Rng rng(seed);
  DenseVector e = rng.normal_vector(y.size());
  const double scale = noise_norm / norm2(e);
  for (auto& v : e) v *= scale;
  const double level_db = noise_norm > 0.0 ? 10.0 * std::log10(power / (noise_norm * noise_norm))
                                           : kSnrCapDb;
  return finish_noise(y, std::move(e), level_db);
}

// ---- metrics --------------------------------------------------------------

double snr_db(const DenseVector& x_star, const DenseVector& x_true) {
  require_same_size(x_star, x_true, "snr_db");
  const double ref = norm2_sq(x_true);
  if (!(ref > 0.0)) throw DegenerateError("snr_db: reference signal is zero");
  const double err = distance2(x_star, x_true);
  if (err == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, -10.0 * std::log10(err * err / ref));
}

double relative_error(const DenseVector& x_star, const DenseVector& x_true) {
  require_same_size(x_star, x_true, "relative_error");
  const double ref = norm2(x_true);
  if (!(ref > 0.0)) throw DegenerateError("relative_error: reference signal is zero");
  return distance2(x_star, x_true) / ref;
}

}  // namespace hvsparse
