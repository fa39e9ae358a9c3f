#include "agepinn/training/adam.hpp"

#include <cmath>
#include <string>

#include "agepinn/error.hpp"

namespace agepinn::train {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw UsageError("adam: learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw UsageError("adam: betas must be in [0, 1)");
  }
  if (!(eps > 0.0)) throw UsageError("adam: eps must be positive");
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw UsageError("adam_step: length mismatch");
  }
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!std::isfinite(grads[k])) {
      throw NumericError("adam_step: non-finite gradient at index " + std::to_string(k));
    }
  }
  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = c.beta1 * state.m[k] + (1.0 - c.beta1) * g;
    state.v[k] = c.beta2 * state.v[k] + (1.0 - c.beta2) * g * g;
    const double mhat = state.m[k] / bc1;
    const double vhat = state.v[k] / bc2;
    params[k] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

}  // namespace agepinn::train
