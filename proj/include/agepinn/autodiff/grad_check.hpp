#pragma once

#include <functional>
#include <span>

namespace agepinn {

using ScalarObjective = std::function<double(std::span<const double>)>;

// Max over coordinates of |analytic - central difference| / max(|analytic|, 1e-12).
// Throws NumericError if any evaluation of `f` is non-finite and UsageError
// for h <= 0 or mismatched lengths.
double grad_check(const ScalarObjective& f, std::span<const double> theta,
                  std::span<const double> analytic, double h);

}  // namespace agepinn
