#pragma once

// Structure-of-arrays activation storage. A real-valued layer keeps one
// channel, a Dual2 layer keeps three (value, d/da, d/dt) so that every channel
// can go through the dense SIMD kernels unchanged.

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "agepinn/autodiff/dual2.hpp"

namespace agepinn::nn {

template <class T>
struct Lanes;

template <>
struct Lanes<double> {
  static constexpr int kChannels = 1;
  std::array<std::vector<double>, 1> ch;

  std::size_t size() const { return ch[0].size(); }
  void resize(std::size_t n) { ch[0].assign(n, 0.0); }
  void zero() { std::fill(ch[0].begin(), ch[0].end(), 0.0); }
  double load(std::size_t i) const { return ch[0][i]; }
  void store(std::size_t i, double x) { ch[0][i] = x; }
};

template <>
struct Lanes<Dual2> {
  static constexpr int kChannels = 3;
  std::array<std::vector<double>, 3> ch;

  std::size_t size() const { return ch[0].size(); }
  void resize(std::size_t n) {
    for (auto& c : ch) c.assign(n, 0.0);
  }
  void zero() {
    for (auto& c : ch) std::fill(c.begin(), c.end(), 0.0);
  }
  Dual2 load(std::size_t i) const { return {ch[0][i], ch[1][i], ch[2][i]}; }
  void store(std::size_t i, const Dual2& x) {
    ch[0][i] = x.value;
    ch[1][i] = x.da;
    ch[2][i] = x.dt;
  }
};

// Weights applied to the three components of a Dual2 parameter adjoint when
// it is folded into a real gradient: g += value*adj.value + da*adj.da + dt*adj.dt.
// Ignored for real-valued sweeps, where the seed already carries the scale.
struct Projection {
  double value = 1.0;
  double da = 0.0;
  double dt = 0.0;
};

}  // namespace agepinn::nn
