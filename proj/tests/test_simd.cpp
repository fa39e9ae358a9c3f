#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "agepinn/error.hpp"
#include "agepinn/simd/kernels.hpp"

using namespace agepinn;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol * (1.0 + std::abs(b[i])));
}

}  // namespace

TEST_CASE("isa names parse and round-trip") {
  CHECK(simd::parse_isa("scalar") == simd::Isa::scalar);
  CHECK(simd::parse_isa("avx2") == simd::Isa::avx2);
  CHECK(simd::parse_isa("auto") == simd::best_isa());
  CHECK(simd::isa_name(simd::Isa::scalar) == std::string_view("scalar"));
  CHECK_THROWS_AS(simd::parse_isa("neon9"), UsageError);
  CHECK(simd::isa_supported(simd::Isa::scalar));
}

TEST_CASE("switching the active isa") {
  const auto before = simd::active_isa();
  simd::set_active_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  if (!simd::isa_supported(simd::Isa::avx2)) {
    CHECK_THROWS_AS(simd::set_active_isa(simd::Isa::avx2), UsageError);
  }
  simd::set_active_isa(before);
}

TEST_CASE("scalar kernels against naive loops") {
  const auto& k = simd::scalar_kernels();
  std::mt19937_64 rng(3);
  const std::size_t rows = 5, cols = 7;
  auto w = random_vec(rng, rows * cols), x = random_vec(rng, cols), z = random_vec(rng, rows);

  std::vector<double> y(rows);
  k.gemv(w.data(), rows, cols, x.data(), y.data());
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0;
    for (std::size_t c = 0; c < cols; ++c) s += w[r * cols + c] * x[c];
    CHECK(y[r] == doctest::Approx(s).epsilon(1e-14));
  }

  std::vector<double> xt(cols, 1.0);
  k.gemv_t_acc(w.data(), rows, cols, z.data(), xt.data());
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 1.0;
    for (std::size_t r = 0; r < rows; ++r) s += w[r * cols + c] * z[r];
    CHECK(xt[c] == doctest::Approx(s).epsilon(1e-14));
  }

  auto g = w;
  k.rank1_acc(g.data(), rows, cols, z.data(), x.data());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) CHECK(g[r * cols + c] == doctest::Approx(w[r * cols + c] + z[r] * x[c]));
  }

  double d = 0;
  for (std::size_t c = 0; c < cols; ++c) d += x[c] * x[c];
  CHECK(k.dot(x.data(), x.data(), cols) == doctest::Approx(d).epsilon(1e-14));

  auto yy = x;
  k.axpy(2.0, x.data(), yy.data(), cols);
  for (std::size_t c = 0; c < cols; ++c) CHECK(yy[c] == 3.0 * x[c]);
}

TEST_CASE("avx2 kernels match scalar kernels") {
  if (!simd::isa_supported(simd::Isa::avx2)) {
    MESSAGE("avx2 not available on this host; skipped");
    return;
  }
  const auto& s = simd::scalar_kernels();
  const auto& v = simd::kernels(simd::Isa::avx2);
  std::mt19937_64 rng(11);
  for (std::size_t rows : {1u, 2u, 3u, 4u, 5u, 8u, 13u, 64u}) {
    for (std::size_t cols : {1u, 2u, 3u, 4u, 7u, 8u, 9u, 31u, 128u}) {
      CAPTURE(rows);
      CAPTURE(cols);
      auto w = random_vec(rng, rows * cols), x = random_vec(rng, cols), z = random_vec(rng, rows);

      std::vector<double> ys(rows), yv(rows);
      s.gemv(w.data(), rows, cols, x.data(), ys.data());
      v.gemv(w.data(), rows, cols, x.data(), yv.data());
      check_close(yv, ys, 1e-13);

      auto xs = random_vec(rng, cols), xv = xs;
      s.gemv_t_acc(w.data(), rows, cols, z.data(), xs.data());
      v.gemv_t_acc(w.data(), rows, cols, z.data(), xv.data());
      check_close(xv, xs, 1e-13);

      auto gs = w, gv = w;
      s.rank1_acc(gs.data(), rows, cols, z.data(), x.data());
      v.rank1_acc(gv.data(), rows, cols, z.data(), x.data());
      check_close(gv, gs, 1e-13);

      CHECK(v.dot(w.data(), w.data(), cols) == doctest::Approx(s.dot(w.data(), w.data(), cols)).epsilon(1e-13));
      auto as = x, av = x;
      s.axpy(-0.7, z.data(), as.data(), std::min(rows, cols));
      v.axpy(-0.7, z.data(), av.data(), std::min(rows, cols));
      check_close(av, as, 1e-15);
    }
  }
}

TEST_CASE("zero-length kernels are no-ops") {
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2}) {
    if (!simd::isa_supported(isa)) continue;
    const auto& k = simd::kernels(isa);
    double x = 5.0, y = 7.0;
    CHECK(k.dot(&x, &y, 0) == 0.0);
    k.axpy(3.0, &x, &y, 0);
    CHECK(y == 7.0);
  }
}
