#include <atomic>
#include <cstdlib>
#include <string>

#include "agepinn/error.hpp"
#include "agepinn/simd/kernels.hpp"

namespace agepinn::simd {
namespace {

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("AGEPINN_SIMD")) {
    const std::string_view v{env};
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
  }
  return best_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(AGEPINN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() noexcept { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw UsageError("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw UsageError("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
  }
#if defined(AGEPINN_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

const KernelTable& kernels() noexcept {
#if defined(AGEPINN_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "auto") return best_isa();
  throw UsageError("unknown SIMD variant '" + std::string(name) + "' (expected scalar|avx2|auto)");
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("dot: length mismatch");
  return kernels().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw UsageError("axpy: length mismatch");
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace agepinn::simd
