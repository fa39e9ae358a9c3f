#pragma once

// Stacked LSTM surrogate with a dense head. Each sample (a_norm, t_norm) is a
// length-1 sequence whose single step is the 2-vector; hidden and cell states
// start at zero. Gate blocks are stacked in the order input, forget,
// candidate, output:
//   i = sigmoid(.), f = sigmoid(.), g = tanh(.), o = sigmoid(.)
//   c' = f*c + i*g,  h' = o*tanh(c')
// Dropout acts on h' between layers; the head maps the last h' to the output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agepinn/autodiff/dual2.hpp"
#include "agepinn/networks/dropout.hpp"
#include "agepinn/networks/lanes.hpp"
#include "agepinn/networks/layer_ops.hpp"

namespace agepinn::nn {

inline constexpr std::size_t kDefaultLstmLayers = 4;
inline constexpr std::size_t kDefaultLstmHidden = 64;
inline constexpr std::size_t kLstmGates = 4;

std::size_t lstm_parameter_count(std::size_t layers, std::size_t hidden, std::size_t input = 2);

// Flat layout per layer: input weights (4H x in), recurrent weights (4H x H),
// bias (4H); then head weights (H) and head bias (1).
class LstmParams {
 public:
  LstmParams() = default;
  // Zero-filled. Throws UsageError for zero layers or units.
  LstmParams(std::size_t layers, std::size_t hidden, std::size_t input = 2);

  std::size_t layers() const { return layers_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t input() const { return input_; }
  std::size_t input_width(std::size_t layer) const { return layer == 0 ? input_ : hidden_; }
  std::size_t size() const { return flat_.size(); }

  std::size_t input_weights_offset(std::size_t layer) const { return offsets_.at(layer); }
  std::size_t recurrent_weights_offset(std::size_t layer) const {
    return offsets_.at(layer) + kLstmGates * hidden_ * input_width(layer);
  }
  std::size_t bias_offset(std::size_t layer) const {
    return recurrent_weights_offset(layer) + kLstmGates * hidden_ * hidden_;
  }
  std::size_t head_weights_offset() const { return head_offset_; }
  std::size_t head_bias_offset() const { return head_offset_ + hidden_; }

  std::span<double> flat() { return flat_; }
  std::span<const double> flat() const { return flat_; }
  std::vector<double> flatten() const { return flat_; }
  void unflatten(std::span<const double> values);

 private:
  std::size_t layers_ = 0;
  std::size_t hidden_ = 0;
  std::size_t input_ = 2;
  std::vector<std::size_t> offsets_;
  std::size_t head_offset_ = 0;
  std::vector<double> flat_;
};

// Sigmoid gates per unit: input, forget, output.
std::size_t gate_count(const LstmParams& params);

// Weights uniform in +-1/sqrt(hidden), forget-gate bias +1, other biases 0.
LstmParams lstm_init(std::size_t layers, std::size_t hidden, std::uint64_t seed);

template <class T>
struct LstmLayerTrace {
  Lanes<T> x;       // layer input (after dropout of the previous layer)
  Lanes<T> h_prev;  // zero initial state
  Lanes<T> c_prev;
  Lanes<T> z;       // 4H pre-activations, reused for gate adjoints
  Lanes<T> gates;   // 4H activations i|f|g|o
  Lanes<T> c;
  Lanes<T> tc;      // tanh(c)
  Lanes<T> h;
};

template <class T>
struct LstmTrace {
  std::vector<LstmLayerTrace<T>> layer;
  std::vector<double> mask;  // (layers-1) x hidden multipliers
  Lanes<T> tmp;
  Lanes<T> hbar;
  Lanes<T> xbar;
  Lanes<T> out_adj;
  detail::ProjectScratch scratch;
};

template <class T>
T lstm_forward(const LstmParams& params, const T& a_norm, const T& t_norm,
               const DropoutSpec& dropout, LstmTrace<T>& trace);

double lstm_forward(const LstmParams& params, double a_norm, double t_norm,
                    const DropoutSpec& dropout);
Dual2 lstm_forward(const LstmParams& params, const Dual2& a_norm, const Dual2& t_norm,
                   const DropoutSpec& dropout);

template <class T>
void lstm_backward(const LstmParams& params, LstmTrace<T>& trace, const T& seed,
                   const Projection& proj, std::span<double> grad);

// Node-by-node evaluation in any scalar algebra. `param(k)` yields flat
// parameter k, `konst(x)` a constant, `mask` the multipliers from draw_masks.
template <class T, class ParamFn, class ConstFn>
T lstm_forward_generic(const LstmParams& shape, ParamFn&& param, ConstFn&& konst,
                       const T& a_norm, const T& t_norm, std::span<const double> mask) {
  using std::tanh;
  const std::size_t H = shape.hidden();
  std::vector<T> x{a_norm, t_norm};
  std::vector<T> h;
  for (std::size_t l = 0; l < shape.layers(); ++l) {
    const std::size_t in = shape.input_width(l);
    const std::size_t wo = shape.input_weights_offset(l);
    const std::size_t uo = shape.recurrent_weights_offset(l);
    const std::size_t bo = shape.bias_offset(l);
    std::vector<T> zero_state(H, konst(0.0));
    std::vector<T> z;
    for (std::size_t r = 0; r < kLstmGates * H; ++r) {
      T acc = param(bo + r);
      for (std::size_t c = 0; c < in; ++c) acc = acc + param(wo + r * in + c) * x[c];
      for (std::size_t c = 0; c < H; ++c) acc = acc + param(uo + r * H + c) * zero_state[c];
      z.push_back(acc);
    }
    h.clear();
    for (std::size_t k = 0; k < H; ++k) {
      const T i = sigmoid(z[k]);
      const T f = sigmoid(z[H + k]);
      const T g = tanh(z[2 * H + k]);
      const T o = sigmoid(z[3 * H + k]);
      const T c = f * zero_state[k] + i * g;
      h.push_back(o * tanh(c));
    }
    if (l + 1 < shape.layers()) {
      x.clear();
      for (std::size_t k = 0; k < H; ++k) x.push_back(mask[l * H + k] * h[k]);
    }
  }
  T out = param(shape.head_bias_offset());
  for (std::size_t k = 0; k < H; ++k) out = out + param(shape.head_weights_offset() + k) * h[k];
  return out;
}

}  // namespace agepinn::nn
