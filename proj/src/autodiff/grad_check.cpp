#include "agepinn/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "agepinn/error.hpp"

namespace agepinn {

double grad_check(const ScalarObjective& f, std::span<const double> theta,
                  std::span<const double> analytic, double h) {
  if (!(h > 0.0)) throw UsageError("grad_check: step must be positive");
  if (theta.size() != analytic.size()) throw UsageError("grad_check: length mismatch");
  std::vector<double> x(theta.begin(), theta.end());
  const auto eval = [&](std::size_t k) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw NumericError("grad_check: non-finite objective near coordinate " + std::to_string(k));
    }
    return v;
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double up = eval(k);
    x[k] = saved - h;
    const double down = eval(k);
    x[k] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double err = std::abs(analytic[k] - fd) / std::max(std::abs(analytic[k]), 1e-12);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace agepinn
