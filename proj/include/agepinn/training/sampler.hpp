#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace agepinn::train {

// A collocation point in normalized coordinates.
struct Point {
  double a = 0.0;
  double t = 0.0;
};

struct SamplerConfig {
  std::size_t n_interior = 5000;
  std::size_t m_initial = 2000;
  std::size_t k_boundary = 2000;
  std::uint64_t seed = 0;

  // Throws UsageError if any count is zero.
  void validate() const;
};

enum class PointKind : std::uint64_t { interior = 0, initial = 1, boundary = 2 };

// interior: uniform (a, t) in [0,1)^2; initial: uniform a with t = 0;
// boundary: uniform t with a = 0. The stream is keyed by (seed, epoch, kind).
std::vector<Point> sample_points(const SamplerConfig& config, PointKind kind, std::uint64_t epoch);

struct Batches {
  std::vector<Point> interior;
  std::vector<Point> initial;
  std::vector<Point> boundary;

  static Batches sample(const SamplerConfig& config, std::uint64_t epoch);
};

}  // namespace agepinn::train
