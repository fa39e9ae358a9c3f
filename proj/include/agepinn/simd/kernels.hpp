#pragma once

// Dense double-precision kernels used by the network layers. Every kernel has
// a scalar reference implementation and, where the CPU supports it, an AVX2+FMA
// variant. The active variant is chosen once at startup (or forced through
// set_active_isa / AGEPINN_SIMD) and stays fixed for the process, which keeps
// repeated runs bitwise reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace agepinn::simd {

enum class Isa { scalar, avx2 };

// Raw kernel signatures. Matrices are row-major, rows x cols, contiguous.
struct KernelTable {
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n) noexcept;
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  // y = W x
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
               double* y) noexcept;
  // x += W^T z
  void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* z,
                     double* x) noexcept;
  // G += u x^T
  void (*rank1_acc)(double* g, std::size_t rows, std::size_t cols, const double* u,
                    const double* x) noexcept;
};

const KernelTable& scalar_kernels() noexcept;
#if defined(AGEPINN_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;
Isa best_isa() noexcept;
Isa active_isa() noexcept;
// Throws UsageError when the ISA is not available on this CPU or build.
void set_active_isa(Isa isa);
const KernelTable& kernels(Isa isa);
const KernelTable& kernels() noexcept;

std::string_view isa_name(Isa isa) noexcept;
// Accepts "scalar", "avx2" and "auto" (best available).
Isa parse_isa(std::string_view name);

// Span wrappers over the active table.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace agepinn::simd
