#pragma once

#include <cstddef>
#include <vector>

#include "agepinn/demography/coefficients.hpp"

namespace agepinn::demo {

// Composite trapezoid rule on [lo, hi]; defaults to the fertility support.
class Quadrature {
 public:
  // Throws UsageError for nodes < 2 or hi <= lo.
  explicit Quadrature(std::size_t nodes = 61, double lo = kFertilityLow, double hi = kFertilityHigh);

  std::size_t size() const { return nodes_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  double lo_;
  double hi_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// w_j * b(a_j, t) for every node; the birth integral is their dot product with
// the density at the nodes.
std::vector<double> birth_weights(double year, const PolicyScenario& scenario, const Quadrature& quad);

// sum_j w_j b(a_j, t) density(a_j). Throws NumericError if density returns a
// non-finite value.
template <class DensityFn>
double birth_integral(DensityFn&& density, double year, const PolicyScenario& scenario,
                      const Quadrature& quad);

}  // namespace agepinn::demo

#include <cmath>
#include <string>

#include "agepinn/error.hpp"

namespace agepinn::demo {

template <class DensityFn>
double birth_integral(DensityFn&& density, double year, const PolicyScenario& scenario,
                      const Quadrature& quad) {
  double acc = 0.0;
  for (std::size_t j = 0; j < quad.size(); ++j) {
    const double a = quad.nodes()[j];
    const double p = density(a);
    if (!std::isfinite(p)) {
      throw NumericError("birth_integral: non-finite density at age " + std::to_string(a));
    }
    acc += quad.weights()[j] * fertility(a, year, scenario) * p;
  }
  return acc;
}

}  // namespace agepinn::demo
