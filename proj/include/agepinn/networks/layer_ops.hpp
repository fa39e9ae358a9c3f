#pragma once

// Dense-layer building blocks shared by the feed-forward and LSTM surrogates.
// Internal header.

#include <cstddef>
#include <span>
#include <vector>

#include "agepinn/networks/lanes.hpp"
#include "agepinn/simd/kernels.hpp"

namespace agepinn::nn::detail {

// z = W x + b over every channel; the bias only enters the value channel.
template <class T>
void affine(const double* w, const double* b, std::size_t rows, std::size_t cols,
            const Lanes<T>& x, Lanes<T>& z) {
  const auto& k = simd::kernels();
  for (int c = 0; c < Lanes<T>::kChannels; ++c) {
    k.gemv(w, rows, cols, x.ch[c].data(), z.ch[c].data());
  }
  if (b != nullptr) {
    for (std::size_t r = 0; r < rows; ++r) z.ch[0][r] += b[r];
  }
}

// x += W^T z over every channel.
template <class T>
void affine_transpose(const double* w, std::size_t rows, std::size_t cols, const Lanes<T>& z,
                      Lanes<T>& x) {
  const auto& k = simd::kernels();
  for (int c = 0; c < Lanes<T>::kChannels; ++c) {
    k.gemv_t_acc(w, rows, cols, z.ch[c].data(), x.ch[c].data());
  }
}

// Scratch vectors for projected weight gradients.
struct ProjectScratch {
  std::vector<double> u, p, q;
};

// Parameter adjoint of W is zbar (x) x in the chosen algebra. Folds it into the
// flat gradient: gw (rows x cols) and gb (rows, may be null).
inline void weight_grad(const Lanes<double>& zbar, const Lanes<double>& x, const Projection&,
                        std::size_t rows, std::size_t cols, double* gw, double* gb,
                        ProjectScratch&) {
  const auto& k = simd::kernels();
  k.rank1_acc(gw, rows, cols, zbar.ch[0].data(), x.ch[0].data());
  if (gb != nullptr) {
    for (std::size_t r = 0; r < rows; ++r) gb[r] += zbar.ch[0][r];
  }
}

// Dual2 product zbar_r * x_c projected with (pv, pa, pt):
//   x.v*(pv zv + pa za + pt zt) + x.a*(pa zv) + x.t*(pt zv).
inline void weight_grad(const Lanes<Dual2>& zbar, const Lanes<Dual2>& x, const Projection& proj,
                        std::size_t rows, std::size_t cols, double* gw, double* gb,
                        ProjectScratch& s) {
  const auto& k = simd::kernels();
  s.u.resize(rows);
  s.p.resize(rows);
  s.q.resize(rows);
  const auto& zv = zbar.ch[0];
  const auto& za = zbar.ch[1];
  const auto& zt = zbar.ch[2];
  for (std::size_t r = 0; r < rows; ++r) {
    s.u[r] = proj.value * zv[r] + proj.da * za[r] + proj.dt * zt[r];
    s.p[r] = proj.da * zv[r];
    s.q[r] = proj.dt * zv[r];
  }
  k.rank1_acc(gw, rows, cols, s.u.data(), x.ch[0].data());
  if (proj.da != 0.0) k.rank1_acc(gw, rows, cols, s.p.data(), x.ch[1].data());
  if (proj.dt != 0.0) k.rank1_acc(gw, rows, cols, s.q.data(), x.ch[2].data());
  if (gb != nullptr) {
    for (std::size_t r = 0; r < rows; ++r) gb[r] += s.u[r];
  }
}

inline double project(double adj, const Projection&) { return adj; }
inline double project(const Dual2& adj, const Projection& p) {
  return p.value * adj.value + p.da * adj.da + p.dt * adj.dt;
}

}  // namespace agepinn::nn::detail
