#include "agepinn/networks/lstm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "agepinn/error.hpp"
#include "agepinn/random.hpp"

namespace agepinn::nn {

std::size_t lstm_parameter_count(std::size_t layers, std::size_t hidden, std::size_t input) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = l == 0 ? input : hidden;
    n += kLstmGates * hidden * (in + hidden + 1);
  }
  return n + hidden + 1;
}

LstmParams::LstmParams(std::size_t layers, std::size_t hidden, std::size_t input)
    : layers_(layers), hidden_(hidden), input_(input) {
  if (layers == 0 || hidden == 0 || input == 0) {
    throw UsageError("lstm: layers, hidden units and input width must be positive");
  }
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets_.push_back(off);
    off += kLstmGates * hidden * (input_width(l) + hidden + 1);
  }
  head_offset_ = off;
  flat_.assign(lstm_parameter_count(layers, hidden, input), 0.0);
}

void LstmParams::unflatten(std::span<const double> values) {
  if (values.size() != flat_.size()) {
    throw UsageError("lstm: unflatten expected " + std::to_string(flat_.size()) +
                     " values, got " + std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), flat_.begin());
}

std::size_t gate_count(const LstmParams& params) { return params.layers() * params.hidden() * 3; }

LstmParams lstm_init(std::size_t layers, std::size_t hidden, std::uint64_t seed) {
  LstmParams p(layers, hidden);
  std::mt19937_64 rng(seed);
  const double limit = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto flat = p.flat();
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t k = p.input_weights_offset(l); k < p.bias_offset(l); ++k) {
      flat[k] = limit * (2.0 * uniform01(rng) - 1.0);
    }
    for (std::size_t k = 0; k < hidden; ++k) flat[p.bias_offset(l) + hidden + k] = 1.0;
  }
  for (std::size_t k = 0; k < hidden; ++k) {
    flat[p.head_weights_offset() + k] = limit * (2.0 * uniform01(rng) - 1.0);
  }
  return p;
}

template <class T>
T lstm_forward(const LstmParams& params, const T& a_norm, const T& t_norm,
               const DropoutSpec& dropout, LstmTrace<T>& trace) {
  using std::tanh;
  validate(dropout);
  const std::size_t H = params.hidden();
  const std::size_t L = params.layers();
  const double* flat = params.flat().data();
  trace.layer.resize(L);
  trace.mask = draw_masks(dropout, L - 1, H);
  for (std::size_t l = 0; l < L; ++l) {
    auto& s = trace.layer[l];
    const std::size_t in = params.input_width(l);
    if (l == 0) {
      s.x.resize(2);
      s.x.store(0, a_norm);
      s.x.store(1, t_norm);
    } else {
      const auto& prev = trace.layer[l - 1].h;
      s.x.resize(H);
      for (int c = 0; c < Lanes<T>::kChannels; ++c) {
        for (std::size_t k = 0; k < H; ++k) s.x.ch[c][k] = trace.mask[(l - 1) * H + k] * prev.ch[c][k];
      }
    }
    s.h_prev.resize(H);
    s.c_prev.resize(H);
    s.z.resize(kLstmGates * H);
    trace.tmp.resize(kLstmGates * H);
    detail::affine(flat + params.input_weights_offset(l), flat + params.bias_offset(l),
                   kLstmGates * H, in, s.x, s.z);
    detail::affine<T>(flat + params.recurrent_weights_offset(l), nullptr, kLstmGates * H, H,
                      s.h_prev, trace.tmp);
    for (int c = 0; c < Lanes<T>::kChannels; ++c) {
      for (std::size_t r = 0; r < kLstmGates * H; ++r) s.z.ch[c][r] += trace.tmp.ch[c][r];
    }
    s.gates.resize(kLstmGates * H);
    s.c.resize(H);
    s.tc.resize(H);
    s.h.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
      const T i = sigmoid(s.z.load(k));
      const T f = sigmoid(s.z.load(H + k));
      const T g = tanh(s.z.load(2 * H + k));
      const T o = sigmoid(s.z.load(3 * H + k));
      const T c = f * s.c_prev.load(k) + i * g;
      const T tc = tanh(c);
      s.gates.store(k, i);
      s.gates.store(H + k, f);
      s.gates.store(2 * H + k, g);
      s.gates.store(3 * H + k, o);
      s.c.store(k, c);
      s.tc.store(k, tc);
      s.h.store(k, o * tc);
    }
  }
  const auto& h = trace.layer[L - 1].h;
  const double* wh = flat + params.head_weights_offset();
  const auto& kern = simd::kernels();
  T out{};
  if constexpr (Lanes<T>::kChannels == 1) {
    out = kern.dot(wh, h.ch[0].data(), H) + flat[params.head_bias_offset()];
  } else {
    out = T{kern.dot(wh, h.ch[0].data(), H) + flat[params.head_bias_offset()],
            kern.dot(wh, h.ch[1].data(), H), kern.dot(wh, h.ch[2].data(), H)};
  }
  return out;
}

template <class T>
void lstm_backward(const LstmParams& params, LstmTrace<T>& trace, const T& seed,
                   const Projection& proj, std::span<double> grad) {
  if (grad.size() != params.size()) throw UsageError("lstm_backward: gradient length mismatch");
  const std::size_t H = params.hidden();
  const std::size_t L = params.layers();
  if (trace.layer.size() != L) throw UsageError("lstm_backward: no forward trace");
  const double* flat = params.flat().data();
  double* g = grad.data();

  // Head: out = w . h + b.
  trace.out_adj.resize(1);
  trace.out_adj.store(0, seed);
  detail::weight_grad(trace.out_adj, trace.layer[L - 1].h, proj, 1, H,
                      g + params.head_weights_offset(), g + params.head_bias_offset(),
                      trace.scratch);
  trace.hbar.resize(H);
  detail::affine_transpose(flat + params.head_weights_offset(), 1, H, trace.out_adj, trace.hbar);

  for (std::size_t l = L; l-- > 0;) {
    auto& s = trace.layer[l];
    const std::size_t in = params.input_width(l);
    Lanes<T>& zbar = s.z;  // pre-activations are no longer needed
    for (std::size_t k = 0; k < H; ++k) {
      const T hb = trace.hbar.load(k);
      const T i = s.gates.load(k);
      const T f = s.gates.load(H + k);
      const T gg = s.gates.load(2 * H + k);
      const T o = s.gates.load(3 * H + k);
      const T tc = s.tc.load(k);
      const T ob = hb * tc;
      const T cb = hb * o * (1.0 - tc * tc);
      const T ib = cb * gg;
      const T gb = cb * i;
      const T fb = cb * s.c_prev.load(k);
      zbar.store(k, ib * i * (1.0 - i));
      zbar.store(H + k, fb * f * (1.0 - f));
      zbar.store(2 * H + k, gb * (1.0 - gg * gg));
      zbar.store(3 * H + k, ob * o * (1.0 - o));
    }
    detail::weight_grad(zbar, s.x, proj, kLstmGates * H, in, g + params.input_weights_offset(l),
                        g + params.bias_offset(l), trace.scratch);
    detail::weight_grad(zbar, s.h_prev, proj, kLstmGates * H, H,
                        g + params.recurrent_weights_offset(l), nullptr, trace.scratch);
    if (l > 0) {
      trace.xbar.resize(H);
      detail::affine_transpose(flat + params.input_weights_offset(l), kLstmGates * H, H, zbar,
                               trace.xbar);
      for (int c = 0; c < Lanes<T>::kChannels; ++c) {
        for (std::size_t k = 0; k < H; ++k) {
          trace.hbar.ch[c][k] = trace.mask[(l - 1) * H + k] * trace.xbar.ch[c][k];
        }
      }
    }
  }
}

double lstm_forward(const LstmParams& params, double a_norm, double t_norm,
                    const DropoutSpec& dropout) {
  LstmTrace<double> trace;
  return lstm_forward<double>(params, a_norm, t_norm, dropout, trace);
}

Dual2 lstm_forward(const LstmParams& params, const Dual2& a_norm, const Dual2& t_norm,
                   const DropoutSpec& dropout) {
  LstmTrace<Dual2> trace;
  return lstm_forward<Dual2>(params, a_norm, t_norm, dropout, trace);
}

template double lstm_forward<double>(const LstmParams&, const double&, const double&,
                                     const DropoutSpec&, LstmTrace<double>&);
template Dual2 lstm_forward<Dual2>(const LstmParams&, const Dual2&, const Dual2&,
                                   const DropoutSpec&, LstmTrace<Dual2>&);
template void lstm_backward<double>(const LstmParams&, LstmTrace<double>&, const double&,
                                    const Projection&, std::span<double>);
template void lstm_backward<Dual2>(const LstmParams&, LstmTrace<Dual2>&, const Dual2&,
                                   const Projection&, std::span<double>);

}  // namespace agepinn::nn
