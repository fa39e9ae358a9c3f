#pragma once

// Epoch loop: resample the three batches, evaluate the weighted loss and its
// parameter gradient, take one Adam step. The PDE term differentiates through
// the mixed second derivatives (Dual2 forward, Dual2-adjoint reverse sweep);
// the initial and boundary terms need first-order adjoints only.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "agepinn/demography/problem.hpp"
#include "agepinn/networks/surrogate.hpp"
#include "agepinn/training/adam.hpp"
#include "agepinn/training/losses.hpp"
#include "agepinn/training/sampler.hpp"

namespace agepinn::train {

struct TrainConfig {
  SamplerConfig sampler;
  AdamConfig adam;
  LossWeights weights;
  std::size_t epochs = 10000;
  // Stop once the total loss falls below this value; +inf disables the rule.
  double threshold = std::numeric_limits<double>::infinity();
  std::size_t threads = 1;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double total = 0.0;
  double pde = 0.0;
  double ic = 0.0;
  double bc = 0.0;
};

struct LossEvaluation {
  LossComponents components;
  double total = 0.0;
  std::vector<double> gradient;
};

// Loss and gradient at the model's current parameters. `train_mode` enables
// dropout (masks keyed by seed, epoch and point); gradients are reduced over a
// fixed partition of the batches so the result does not depend on `threads`.
LossEvaluation evaluate_loss(const nn::Surrogate& model, const demo::Problem& problem,
                             const Batches& batches, const LossWeights& weights, bool train_mode,
                             std::uint64_t seed, std::uint64_t epoch, std::size_t threads = 1);

struct TrainResult {
  std::vector<EpochRecord> history;
  bool stopped_early = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains `model` in place. Throws NumericError (with a state summary in the
// message) when a loss or gradient becomes non-finite.
TrainResult train(nn::Surrogate& model, const demo::Problem& problem, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace agepinn::train
