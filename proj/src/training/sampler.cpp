#include "agepinn/training/sampler.hpp"

#include <random>

#include "agepinn/error.hpp"
#include "agepinn/random.hpp"

namespace agepinn::train {

void SamplerConfig::validate() const {
  if (n_interior == 0 || m_initial == 0 || k_boundary == 0) {
    throw UsageError("sampler: all point counts must be at least 1");
  }
}

std::vector<Point> sample_points(const SamplerConfig& config, PointKind kind, std::uint64_t epoch) {
  const auto k = static_cast<std::uint64_t>(kind);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  std::vector<Point> pts;
  switch (kind) {
    case PointKind::interior:
      pts.resize(config.n_interior);
      for (auto& p : pts) {
        p.a = uniform01(rng);
        p.t = uniform01(rng);
      }
      break;
    case PointKind::initial:
      pts.resize(config.m_initial);
      for (auto& p : pts) p.a = uniform01(rng);
      break;
    case PointKind::boundary:
      pts.resize(config.k_boundary);
      for (auto& p : pts) p.t = uniform01(rng);
      break;
  }
  return pts;
}

Batches Batches::sample(const SamplerConfig& config, std::uint64_t epoch) {
  return {sample_points(config, PointKind::interior, epoch),
          sample_points(config, PointKind::initial, epoch),
          sample_points(config, PointKind::boundary, epoch)};
}

}  // namespace agepinn::train
