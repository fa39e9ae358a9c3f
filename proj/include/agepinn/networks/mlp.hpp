#pragma once

// Feed-forward tanh surrogate: affine -> tanh over the hidden layers, then a
// final affine layer with no activation. Inputs are (a/a0, (t-t_min)/(t_max-t_min)).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agepinn/autodiff/dual2.hpp"
#include "agepinn/networks/lanes.hpp"
#include "agepinn/networks/layer_ops.hpp"

namespace agepinn::nn {

inline const std::vector<std::size_t> kDefaultMlpWidths{2, 128, 128, 64, 1};

std::size_t mlp_parameter_count(std::span<const std::size_t> widths);

// Flat layout, layer by layer: weight matrix (out x in, row-major) then bias.
class MlpParams {
 public:
  MlpParams() = default;
  // Zero-filled parameters. Throws UsageError unless widths = [2, ..., 1] with
  // every entry positive.
  explicit MlpParams(std::vector<std::size_t> widths);

  const std::vector<std::size_t>& widths() const { return widths_; }
  std::size_t layer_count() const { return widths_.empty() ? 0 : widths_.size() - 1; }
  std::size_t size() const { return flat_.size(); }

  std::size_t weight_offset(std::size_t layer) const { return offsets_.at(layer); }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_.at(layer) + widths_[layer + 1] * widths_[layer];
  }
  double& weight(std::size_t layer, std::size_t out, std::size_t in) {
    return flat_[weight_offset(layer) + out * widths_[layer] + in];
  }
  double weight(std::size_t layer, std::size_t out, std::size_t in) const {
    return flat_[weight_offset(layer) + out * widths_[layer] + in];
  }
  double& bias(std::size_t layer, std::size_t out) { return flat_[bias_offset(layer) + out]; }
  double bias(std::size_t layer, std::size_t out) const { return flat_[bias_offset(layer) + out]; }

  std::span<double> flat() { return flat_; }
  std::span<const double> flat() const { return flat_; }
  std::vector<double> flatten() const { return flat_; }
  // Throws UsageError on a length mismatch.
  void unflatten(std::span<const double> values);

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> flat_;
};

// Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
MlpParams mlp_init(std::vector<std::size_t> widths, std::uint64_t seed);

// Cached activations of one forward pass, reused by mlp_backward.
template <class T>
struct MlpTrace {
  std::vector<Lanes<T>> act;   // act[0] = input, act[l+1] = output of layer l
  std::vector<Lanes<T>> adj;   // adjoint buffers, same shapes as act
  detail::ProjectScratch scratch;
};

template <class T>
T mlp_forward(const MlpParams& params, const T& a_norm, const T& t_norm, MlpTrace<T>& trace);

// Allocating conveniences.
double mlp_forward(const MlpParams& params, double a_norm, double t_norm);
Dual2 mlp_forward(const MlpParams& params, const Dual2& a_norm, const Dual2& t_norm);

// Reverse sweep over the trace of the last forward pass. Adds seed-scaled
// parameter adjoints to `grad`; in Dual2 algebra each parameter adjoint is
// folded through `proj`.
template <class T>
void mlp_backward(const MlpParams& params, MlpTrace<T>& trace, const T& seed,
                  const Projection& proj, std::span<double> grad);

// Node-by-node evaluation in any scalar algebra (double, Dual2, tape Var).
// `param(k)` yields flat parameter k in that algebra.
template <class T, class ParamFn>
T mlp_forward_generic(std::span<const std::size_t> widths, ParamFn&& param, const T& a_norm,
                      const T& t_norm) {
  using std::tanh;
  std::vector<T> x{a_norm, t_norm};
  std::size_t off = 0;
  const std::size_t layers = widths.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = widths[l];
    const std::size_t out = widths[l + 1];
    std::vector<T> y;
    y.reserve(out);
    for (std::size_t r = 0; r < out; ++r) {
      T acc = param(off + out * in + r);
      for (std::size_t c = 0; c < in; ++c) acc = acc + param(off + r * in + c) * x[c];
      y.push_back(l + 1 < layers ? tanh(acc) : acc);
    }
    off += out * in + out;
    x = std::move(y);
  }
  return x[0];
}

}  // namespace agepinn::nn
