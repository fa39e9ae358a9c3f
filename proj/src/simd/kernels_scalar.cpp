#include "agepinn/simd/kernels.hpp"

namespace agepinn::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 double* y) noexcept {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(w + r * cols, x, cols);
}

void gemv_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* z,
                       double* x) noexcept {
  for (std::size_t r = 0; r < rows; ++r) {
    if (z[r] != 0.0) axpy_scalar(z[r], w + r * cols, x, cols);
  }
}

void rank1_acc_scalar(double* g, std::size_t rows, std::size_t cols, const double* u,
                      const double* x) noexcept {
  for (std::size_t r = 0; r < rows; ++r) {
    if (u[r] != 0.0) axpy_scalar(u[r], x, g + r * cols, cols);
  }
}

constexpr KernelTable kScalar{dot_scalar, axpy_scalar, gemv_scalar, gemv_t_acc_scalar,
                              rank1_acc_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace agepinn::simd
