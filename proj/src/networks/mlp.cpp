#include "agepinn/networks/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "agepinn/error.hpp"
#include "agepinn/random.hpp"

namespace agepinn::nn {
namespace {

void validate_widths(std::span<const std::size_t> widths) {
  if (widths.size() < 2) throw UsageError("mlp: need at least input and output widths");
  if (widths.front() != 2) throw UsageError("mlp: input width must be 2");
  if (widths.back() != 1) throw UsageError("mlp: output width must be 1");
  for (std::size_t w : widths) {
    if (w == 0) throw UsageError("mlp: widths must be positive");
  }
}

}  // namespace

std::size_t mlp_parameter_count(std::span<const std::size_t> widths) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l + 1] * (widths[l] + 1);
  return n;
}

MlpParams::MlpParams(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  validate_widths(widths_);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(off);
    off += widths_[l + 1] * (widths_[l] + 1);
  }
  flat_.assign(off, 0.0);
}

void MlpParams::unflatten(std::span<const double> values) {
  if (values.size() != flat_.size()) {
    throw UsageError("mlp: unflatten expected " + std::to_string(flat_.size()) +
                     " values, got " + std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), flat_.begin());
}

MlpParams mlp_init(std::vector<std::size_t> widths, std::uint64_t seed) {
  MlpParams p(std::move(widths));
  std::mt19937_64 rng(seed);
  const auto& w = p.widths();
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w[l] + w[l + 1]));
    for (std::size_t r = 0; r < w[l + 1]; ++r) {
      for (std::size_t c = 0; c < w[l]; ++c) p.weight(l, r, c) = limit * (2.0 * uniform01(rng) - 1.0);
    }
  }
  return p;
}

template <class T>
T mlp_forward(const MlpParams& params, const T& a_norm, const T& t_norm, MlpTrace<T>& trace) {
  using std::tanh;
  const auto& w = params.widths();
  const std::size_t layers = params.layer_count();
  trace.act.resize(layers + 1);
  trace.act[0].resize(2);
  trace.act[0].store(0, a_norm);
  trace.act[0].store(1, t_norm);
  const double* flat = params.flat().data();
  for (std::size_t l = 0; l < layers; ++l) {
    Lanes<T>& z = trace.act[l + 1];
    z.resize(w[l + 1]);
    detail::affine(flat + params.weight_offset(l), flat + params.bias_offset(l), w[l + 1], w[l],
                   trace.act[l], z);
    if (l + 1 < layers) {
      for (std::size_t r = 0; r < w[l + 1]; ++r) z.store(r, tanh(z.load(r)));
    }
  }
  return trace.act[layers].load(0);
}

template <class T>
void mlp_backward(const MlpParams& params, MlpTrace<T>& trace, const T& seed,
                  const Projection& proj, std::span<double> grad) {
  if (grad.size() != params.size()) throw UsageError("mlp_backward: gradient length mismatch");
  const auto& w = params.widths();
  const std::size_t layers = params.layer_count();
  if (trace.act.size() != layers + 1) throw UsageError("mlp_backward: no forward trace");
  trace.adj.resize(layers + 1);
  trace.adj[layers].resize(1);
  trace.adj[layers].store(0, seed);
  const double* flat = params.flat().data();
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t rows = w[l + 1];
    const std::size_t cols = w[l];
    Lanes<T>& zbar = trace.adj[l + 1];
    if (l + 1 < layers) {
      const Lanes<T>& h = trace.act[l + 1];
      for (std::size_t r = 0; r < rows; ++r) {
        const T hr = h.load(r);
        zbar.store(r, zbar.load(r) * (1.0 - hr * hr));
      }
    }
    detail::weight_grad(zbar, trace.act[l], proj, rows, cols,
                        grad.data() + params.weight_offset(l), grad.data() + params.bias_offset(l),
                        trace.scratch);
    if (l > 0) {
      trace.adj[l].resize(cols);
      detail::affine_transpose(flat + params.weight_offset(l), rows, cols, zbar, trace.adj[l]);
    }
  }
}

double mlp_forward(const MlpParams& params, double a_norm, double t_norm) {
  MlpTrace<double> trace;
  return mlp_forward<double>(params, a_norm, t_norm, trace);
}

Dual2 mlp_forward(const MlpParams& params, const Dual2& a_norm, const Dual2& t_norm) {
  MlpTrace<Dual2> trace;
  return mlp_forward<Dual2>(params, a_norm, t_norm, trace);
}

template double mlp_forward<double>(const MlpParams&, const double&, const double&,
                                    MlpTrace<double>&);
template Dual2 mlp_forward<Dual2>(const MlpParams&, const Dual2&, const Dual2&, MlpTrace<Dual2>&);
template void mlp_backward<double>(const MlpParams&, MlpTrace<double>&, const double&,
                                   const Projection&, std::span<double>);
template void mlp_backward<Dual2>(const MlpParams&, MlpTrace<Dual2>&, const Dual2&,
                                  const Projection&, std::span<double>);

}  // namespace agepinn::nn
