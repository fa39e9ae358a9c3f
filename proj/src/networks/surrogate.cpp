#include "agepinn/networks/surrogate.hpp"

#include <sstream>

#include "agepinn/error.hpp"

namespace agepinn::nn {

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::mlp ? "pinn" : "lstm-pinn";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "pinn" || name == "mlp") return ModelKind::mlp;
  if (name == "lstm-pinn" || name == "lstm") return ModelKind::lstm;
  throw UsageError("unknown model '" + std::string(name) + "' (expected pinn|lstm-pinn)");
}

std::span<double> Surrogate::parameters() {
  return std::visit([](auto& p) { return p.flat(); }, net_);
}

std::span<const double> Surrogate::parameters() const {
  return std::visit([](const auto& p) -> std::span<const double> { return p.flat(); }, net_);
}

double Surrogate::value(double a_norm, double t_norm) const {
  if (kind() == ModelKind::mlp) return mlp_forward(mlp(), a_norm, t_norm);
  return lstm_forward(lstm(), a_norm, t_norm, DropoutSpec{dropout_rate_, DropoutMode::eval, 0});
}

Dual2 Surrogate::dual(double a_norm, double t_norm) const {
  const auto [a, t] = seed_inputs(a_norm, t_norm);
  if (kind() == ModelKind::mlp) return mlp_forward(mlp(), a, t);
  return lstm_forward(lstm(), a, t, DropoutSpec{dropout_rate_, DropoutMode::eval, 0});
}

std::string Surrogate::architecture() const {
  std::ostringstream os;
  if (kind() == ModelKind::mlp) {
    os << "mlp ";
    const auto& w = mlp().widths();
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  } else {
    os << "lstm " << lstm().layers() << "x" << lstm().hidden() << " dropout=" << dropout_rate_;
  }
  return os.str();
}

DropoutSpec Evaluator::dropout(bool train, std::uint64_t seed) const {
  return DropoutSpec{model_->dropout_rate(), train ? DropoutMode::train : DropoutMode::eval, seed};
}

double Evaluator::forward_value(double a_norm, double t_norm, bool train, std::uint64_t pass_seed,
                                std::size_t slot) {
  if (model_->kind() == ModelKind::mlp) {
    if (mlp_real_.size() <= slot) mlp_real_.resize(slot + 1);
    return mlp_forward<double>(model_->mlp(), a_norm, t_norm, mlp_real_[slot]);
  }
  if (lstm_real_.size() <= slot) lstm_real_.resize(slot + 1);
  return lstm_forward<double>(model_->lstm(), a_norm, t_norm, dropout(train, pass_seed),
                              lstm_real_[slot]);
}

Dual2 Evaluator::forward_dual(double a_norm, double t_norm, bool train, std::uint64_t pass_seed) {
  const auto [a, t] = seed_inputs(a_norm, t_norm);
  if (model_->kind() == ModelKind::mlp) return mlp_forward<Dual2>(model_->mlp(), a, t, mlp_dual_);
  return lstm_forward<Dual2>(model_->lstm(), a, t, dropout(train, pass_seed), lstm_dual_);
}

void Evaluator::backward_value(double seed, std::span<double> grad, std::size_t slot) {
  if (model_->kind() == ModelKind::mlp) {
    if (slot >= mlp_real_.size()) throw UsageError("backward_value: slot has no forward pass");
    mlp_backward<double>(model_->mlp(), mlp_real_[slot], seed, Projection{}, grad);
  } else {
    if (slot >= lstm_real_.size()) throw UsageError("backward_value: slot has no forward pass");
    lstm_backward<double>(model_->lstm(), lstm_real_[slot], seed, Projection{}, grad);
  }
}

void Evaluator::backward_dual(const Projection& proj, std::span<double> grad) {
  const Dual2 root{1.0, 0.0, 0.0};
  if (model_->kind() == ModelKind::mlp) {
    mlp_backward<Dual2>(model_->mlp(), mlp_dual_, root, proj, grad);
  } else {
    lstm_backward<Dual2>(model_->lstm(), lstm_dual_, root, proj, grad);
  }
}

Adjoints Evaluator::parameter_adjoints(double a_norm, double t_norm) {
  const std::size_t n = model_->parameter_count();
  std::vector<double> gv(n, 0.0), ga(n, 0.0), gt(n, 0.0);
  forward_dual(a_norm, t_norm);
  backward_dual(Projection{1.0, 0.0, 0.0}, gv);
  forward_dual(a_norm, t_norm);
  backward_dual(Projection{0.0, 1.0, 0.0}, ga);
  forward_dual(a_norm, t_norm);
  backward_dual(Projection{0.0, 0.0, 1.0}, gt);
  Adjoints out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = Dual2{gv[k], ga[k], gt[k]};
  return out;
}

Tape::Index record_forward(const Surrogate& model, Tape& tape, double a_norm, double t_norm) {
  const auto flat = model.parameters();
  std::vector<Tape::Index> leaves(flat.size());
  for (std::size_t k = 0; k < flat.size(); ++k) leaves[k] = tape.parameter(flat[k], k);
  const auto param = [&](std::size_t k) { return Var{&tape, leaves[k]}; };
  const auto konst = [&](double c) { return Var{&tape, tape.constant(Dual2{c})}; };
  const auto [sa, st] = seed_inputs(a_norm, t_norm);
  const Var a{&tape, tape.constant(sa)};
  const Var t{&tape, tape.constant(st)};
  Var out;
  if (model.kind() == ModelKind::mlp) {
    out = mlp_forward_generic<Var>(model.mlp().widths(), param, a, t);
  } else {
    const auto& p = model.lstm();
    const std::vector<double> mask(p.layers() > 0 ? (p.layers() - 1) * p.hidden() : 0, 1.0);
    out = lstm_forward_generic<Var>(p, param, konst, a, t, mask);
  }
  return out.id;
}

}  // namespace agepinn::nn
