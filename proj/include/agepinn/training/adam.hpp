#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace agepinn::train {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  AdamState() = default;
  AdamState(std::size_t parameter_count, AdamConfig cfg)
      : config(cfg), m(parameter_count, 0.0), v(parameter_count, 0.0) {}
};

// Bias-corrected Adam update in place. Throws UsageError on a length mismatch
// and NumericError on a non-finite gradient (parameters are left untouched).
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

}  // namespace agepinn::train
