#pragma once

// Dual2: a value with two tangents, d/d(age) and d/d(time), both taken with
// respect to the normalized network inputs.

#include <cmath>
#include <span>
#include <utility>

namespace agepinn {

struct Dual2 {
  double value = 0.0;
  double da = 0.0;
  double dt = 0.0;

  constexpr Dual2() = default;
  constexpr Dual2(double v) : value(v) {}  // NOLINT: constants promote implicitly
  constexpr Dual2(double v, double a, double t) : value(v), da(a), dt(t) {}

  friend constexpr bool operator==(const Dual2&, const Dual2&) = default;

  constexpr Dual2& operator+=(const Dual2& o) {
    value += o.value;
    da += o.da;
    dt += o.dt;
    return *this;
  }
  constexpr Dual2& operator-=(const Dual2& o) {
    value -= o.value;
    da -= o.da;
    dt -= o.dt;
    return *this;
  }
};

constexpr Dual2 operator+(const Dual2& x, const Dual2& y) {
  return {x.value + y.value, x.da + y.da, x.dt + y.dt};
}
constexpr Dual2 operator-(const Dual2& x, const Dual2& y) {
  return {x.value - y.value, x.da - y.da, x.dt - y.dt};
}
constexpr Dual2 operator-(const Dual2& x) { return {-x.value, -x.da, -x.dt}; }
constexpr Dual2 operator*(const Dual2& x, const Dual2& y) {
  return {x.value * y.value, x.da * y.value + x.value * y.da, x.dt * y.value + x.value * y.dt};
}
constexpr Dual2 operator*(double c, const Dual2& x) { return {c * x.value, c * x.da, c * x.dt}; }
constexpr Dual2 operator*(const Dual2& x, double c) { return c * x; }

// Throws NumericError when y.value == 0.
Dual2 operator/(const Dual2& x, const Dual2& y);

inline Dual2 tanh(const Dual2& x) {
  const double h = std::tanh(x.value);
  const double d = 1.0 - h * h;
  return {h, d * x.da, d * x.dt};
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Dual2 sigmoid(const Dual2& x) {
  const double s = sigmoid(x.value);
  const double d = s * (1.0 - s);
  return {s, d * x.da, d * x.dt};
}

inline Dual2 exp(const Dual2& x) {
  const double e = std::exp(x.value);
  return {e, e * x.da, e * x.dt};
}

enum class DualOp { add, sub, mul, div, tanh, sigmoid, exp, scale };

// Applies one primitive. Binary ops take two arguments, unary ops one;
// `scale` multiplies its single argument by `factor`.
Dual2 dual_apply(DualOp op, std::span<const Dual2> args, double factor = 1.0);

// Unit-seeded inputs: age carries d/da = 1, time carries d/dt = 1.
constexpr std::pair<Dual2, Dual2> seed_inputs(double a_norm, double t_norm) {
  return {Dual2{a_norm, 1.0, 0.0}, Dual2{t_norm, 0.0, 1.0}};
}

inline bool isfinite(const Dual2& x) {
  return std::isfinite(x.value) && std::isfinite(x.da) && std::isfinite(x.dt);
}

}  // namespace agepinn
