#pragma once

// Model-kind-agnostic wrapper used by training, checkpoints and the CLI.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "agepinn/autodiff/tape.hpp"
#include "agepinn/networks/lstm.hpp"
#include "agepinn/networks/mlp.hpp"

namespace agepinn::nn {

enum class ModelKind { mlp, lstm };

std::string_view model_kind_name(ModelKind kind);  // "pinn" | "lstm-pinn"
ModelKind parse_model_kind(std::string_view name);

class Surrogate {
 public:
  Surrogate() = default;
  explicit Surrogate(MlpParams params) : net_(std::move(params)) {}
  Surrogate(LstmParams params, double dropout_rate) : net_(std::move(params)), dropout_rate_(dropout_rate) {}

  ModelKind kind() const { return net_.index() == 0 ? ModelKind::mlp : ModelKind::lstm; }
  const MlpParams& mlp() const { return std::get<MlpParams>(net_); }
  const LstmParams& lstm() const { return std::get<LstmParams>(net_); }
  double dropout_rate() const { return dropout_rate_; }

  std::span<double> parameters();
  std::span<const double> parameters() const;
  std::size_t parameter_count() const { return parameters().size(); }

  // Eval-mode evaluation; allocate per call.
  double value(double a_norm, double t_norm) const;
  Dual2 dual(double a_norm, double t_norm) const;

  // Human-readable architecture, e.g. "mlp 2,32,32,1" or "lstm 2x16 dropout=0.1".
  std::string architecture() const;

 private:
  std::variant<MlpParams, LstmParams> net_;
  double dropout_rate_ = 0.0;
};

// Reusable forward/backward state for one worker. The trace of the most recent
// forward call in each algebra is what backward differentiates.
class Evaluator {
 public:
  explicit Evaluator(const Surrogate& model) : model_(&model) {}

  // `train` enables dropout with a mask drawn from `pass_seed`. Real-valued
  // passes are kept per `slot` so several can be differentiated later.
  double forward_value(double a_norm, double t_norm, bool train = false,
                       std::uint64_t pass_seed = 0, std::size_t slot = 0);
  Dual2 forward_dual(double a_norm, double t_norm, bool train = false,
                     std::uint64_t pass_seed = 0);

  // grad += seed * dP/dtheta for the last forward_value call in `slot`.
  void backward_value(double seed, std::span<double> grad, std::size_t slot = 0);
  // grad += proj . (dP/dtheta, d2P/da dtheta, d2P/dt dtheta) for the last
  // forward_dual call, with root adjoint {1,0,0}.
  void backward_dual(const Projection& proj, std::span<double> grad);

  // Full per-parameter triples at (a_norm, t_norm), eval mode.
  Adjoints parameter_adjoints(double a_norm, double t_norm);

 private:
  DropoutSpec dropout(bool train, std::uint64_t seed) const;

  const Surrogate* model_;
  std::vector<MlpTrace<double>> mlp_real_;
  MlpTrace<Dual2> mlp_dual_;
  std::vector<LstmTrace<double>> lstm_real_;
  LstmTrace<Dual2> lstm_dual_;
};

// Records the eval-mode forward pass on `tape` with parameter leaves at their
// flat indices and seeded inputs; returns the output node.
Tape::Index record_forward(const Surrogate& model, Tape& tape, double a_norm, double t_norm);

}  // namespace agepinn::nn
