#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace hvsparse {

// Real vector of signal amplitudes or measurements.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double value = 0.0) : data_(n, value) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

// Row-major m x n matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---- vector algebra -------------------------------------------------------

double dot(const DenseVector& a, const DenseVector& b);
double norm1(const DenseVector& x) noexcept;
double norm2(const DenseVector& x) noexcept;
double norm2_sq(const DenseVector& x) noexcept;
double norm_inf(const DenseVector& x) noexcept;
double distance2(const DenseVector& a, const DenseVector& b);

DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a);
DenseVector operator*(double t, const DenseVector& a);

// y <- y + t * x
void axpy(double t, const DenseVector& x, DenseVector& y);

std::size_t count_above(const DenseVector& x, double threshold) noexcept;

void require_same_size(const DenseVector& a, const DenseVector& b, const char* what);

// ---- randomness -----------------------------------------------------------

struct RngSeed {
  std::uint64_t value = 0;
};

// Mixes a base seed with a stream index so independent streams (instance,
// noise, probe directions) never share a state.
RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept;

// Portable stream: mt19937_64 bits turned into doubles without relying on the
// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t bits() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Marsaglia polar method).
  double normal();
  // Uniform integer on [0, n).
  std::size_t below(std::size_t n);
  double sign() { return (bits() >> 63) ? 1.0 : -1.0; }

  DenseVector normal_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// ---- instances and noise --------------------------------------------------

enum class AmplitudeKind { random_sign, gaussian };

// Distribution of the nonzero entries of the sparse ground truth.
struct SignalAmplitude {
  AmplitudeKind kind = AmplitudeKind::random_sign;
  double scale = 1.0;
};

struct GaussianInstance {
  DenseMatrix A;
  DenseVector x_true;
};

// scale * N(0,1) sensing matrix and an s-sparse signal on a random support.
GaussianInstance gaussian_instance(std::size_t n, std::size_t m, std::size_t s, double scale,
                                   RngSeed seed, SignalAmplitude amplitude = {});

struct NoisyData {
  DenseVector y_delta;
  double noise_norm = 0.0;  // ||y_delta - y||_2, the realized delta
  double level_db = 0.0;
};

// White Gaussian noise at the given signal-to-noise power ratio in dB.
NoisyData add_noise_db(const DenseVector& y, double level_db, RngSeed seed);

// Gaussian noise direction rescaled to an exact l2 norm.
NoisyData add_noise_norm(const DenseVector& y, double noise_norm, RngSeed seed);

// ---- metrics --------------------------------------------------------------

inline constexpr double kSnrCapDb = 300.0;

double snr_db(const DenseVector& x_star, const DenseVector& x_true);
double relative_error(const DenseVector& x_star, const DenseVector& x_true);

}  // namespace hvsparse
