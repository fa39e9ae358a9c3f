#include "agepinn/networks/dropout.hpp"

#include "agepinn/error.hpp"
#include "agepinn/random.hpp"

namespace agepinn::nn {

void validate(const DropoutSpec& spec) {
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) throw UsageError("dropout rate must be in [0, 1)");
}

std::vector<double> draw_masks(const DropoutSpec& spec, std::size_t layers, std::size_t units) {
  std::vector<double> mask(layers * units, 1.0);
  if (spec.mode == DropoutMode::eval || spec.rate == 0.0) return mask;
  const double keep = 1.0 - spec.rate;
  const double scale = 1.0 / keep;
  SplitMix64 rng(spec.seed);
  for (double& m : mask) m = uniform01(rng) < keep ? scale : 0.0;
  return mask;
}

}  // namespace agepinn::nn
