#pragma once

#include <cstdint>
#include <vector>

namespace agepinn::nn {

enum class DropoutMode { train, eval };

// Inverted dropout between LSTM layers. In train mode each unit survives with
// probability 1-rate and is rescaled by 1/(1-rate); the mask is drawn once per
// forward pass from `seed` and applied identically to the value and both
// tangents. Eval mode is an exact identity.
struct DropoutSpec {
  double rate = 0.1;
  DropoutMode mode = DropoutMode::eval;
  std::uint64_t seed = 0;
};

// Throws UsageError unless 0 <= rate < 1.
void validate(const DropoutSpec& spec);

// Per-unit multipliers (0 or 1/(1-rate)) for `layers` inter-layer boundaries of
// `units` each, boundary-major. All ones in eval mode.
std::vector<double> draw_masks(const DropoutSpec& spec, std::size_t layers, std::size_t units);

}  // namespace agepinn::nn
