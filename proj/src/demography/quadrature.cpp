#include "agepinn/demography/quadrature.hpp"

namespace agepinn::demo {

Quadrature::Quadrature(std::size_t nodes, double lo, double hi) : lo_(lo), hi_(hi) {
  if (nodes < 2) throw UsageError("quadrature: need at least 2 nodes");
  if (!(hi > lo)) throw UsageError("quadrature: empty interval");
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  nodes_.resize(nodes);
  weights_.assign(nodes, h);
  for (std::size_t j = 0; j < nodes; ++j) nodes_[j] = lo + h * static_cast<double>(j);
  nodes_.back() = hi;
  weights_.front() = 0.5 * h;
  weights_.back() = 0.5 * h;
}

std::vector<double> birth_weights(double year, const PolicyScenario& scenario, const Quadrature& quad) {
  std::vector<double> w(quad.size());
  for (std::size_t j = 0; j < quad.size(); ++j) {
    w[j] = quad.weights()[j] * fertility(quad.nodes()[j], year, scenario);
  }
  return w;
}

}  // namespace agepinn::demo
