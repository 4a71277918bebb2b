#include "hvsparse/kernels.hpp"

#include <algorithm>
#include <string>

#include "hvsparse/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hvsparse::kernels {

namespace {

void check_gemv(const DenseMatrix& A, std::size_t in, std::size_t out, std::size_t want_in,
                std::size_t want_out) {
  if (in != want_in || out != want_out) {
    throw ParameterError("gemv: shape " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + " incompatible with input " +
                         std::to_string(in) + " / output " + std::to_string(out));
  }
}

// Columns handled by one OpenMP task in gemv_t.
constexpr std::size_t kColumnBlock = 64;

}  // namespace

namespace serial {

void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  check_gemv(A, x.size(), y.size(), A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto row = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void gemv_t(const DenseMatrix& A, std::span<const double> r, std::span<double> y) {
  check_gemv(A, r.size(), y.size(), A.rows(), A.cols());
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto row = A.row(i);
    const double ri = r[i];
    for (std::size_t j = 0; j < row.size(); ++j) y[j] += row[j] * ri;
  }
}

}  // namespace serial

namespace openmp {

void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y,
          std::size_t min_work) {
  check_gemv(A, x.size(), y.size(), A.cols(), A.rows());
  const auto rows = static_cast<std::ptrdiff_t>(A.rows());
  const std::size_t cols = A.cols();
  [[maybe_unused]] const bool parallel = A.rows() * cols >= min_work;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* row = A.row(static_cast<std::size_t>(i)).data();
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
}

void gemv_t(const DenseMatrix& A, std::span<const double> r, std::span<double> y,
            std::size_t min_work) {
  check_gemv(A, r.size(), y.size(), A.rows(), A.cols());
  const std::size_t rows = A.rows();
  const std::size_t cols = A.cols();
  const auto blocks = static_cast<std::ptrdiff_t>((cols + kColumnBlock - 1) / kColumnBlock);
  [[maybe_unused]] const bool parallel = rows * cols >= min_work;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kColumnBlock;
    const std::size_t hi = std::min(cols, lo + kColumnBlock);
    for (std::size_t j = lo; j < hi; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = A.row(i).data();
      const double ri = r[i];
      for (std::size_t j = lo; j < hi; ++j) y[j] += row[j] * ri;
    }
  }
}

}  // namespace openmp

DenseVector multiply(Backend backend, const DenseMatrix& A, const DenseVector& x) {
  DenseVector y(A.rows());
  if (backend == Backend::openmp) {
    openmp::gemv(A, x.span(), y.span());
  } else {
    serial::gemv(A, x.span(), y.span());
  }
  return y;
}

DenseVector multiply_transposed(Backend backend, const DenseMatrix& A, const DenseVector& r) {
  DenseVector y(A.cols());
  if (backend == Backend::openmp) {
    openmp::gemv_t(A, r.span(), y.span());
  } else {
    serial::gemv_t(A, r.span(), y.span());
  }
  return y;
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hvsparse::kernels
