#pragma once

#include <cstddef>
#include <span>

#include "hvsparse/core.hpp"

// Dense matrix-vector kernels. The serial versions are the reference; the
// OpenMP versions partition outputs across threads but keep the per-output
// summation order of the serial loop, so both produce bit-identical results.
namespace hvsparse::kernels {

enum class Backend { serial, openmp };

// Work (rows * cols) below which the OpenMP kernels stay on one thread.
inline constexpr std::size_t kParallelMinWork = std::size_t{1} << 15;

namespace serial {
// y = A x
void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y);
// y = A^T r
void gemv_t(const DenseMatrix& A, std::span<const double> r, std::span<double> y);
}  // namespace serial

namespace openmp {
void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y,
          std::size_t min_work = kParallelMinWork);
void gemv_t(const DenseMatrix& A, std::span<const double> r, std::span<double> y,
            std::size_t min_work = kParallelMinWork);
}  // namespace openmp

DenseVector multiply(Backend backend, const DenseMatrix& A, const DenseVector& x);
DenseVector multiply_transposed(Backend backend, const DenseMatrix& A, const DenseVector& r);

int max_threads() noexcept;

}  // namespace hvsparse::kernels
