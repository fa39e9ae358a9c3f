#include "agepinn/training/losses.hpp"

#include <cmath>
#include <sstream>

#include "agepinn/error.hpp"
#include "agepinn/networks/surrogate.hpp"

namespace agepinn::train {

void LossWeights::validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0) throw UsageError("loss weights must be >= 0");
  if (lambda1 == 0.0 && lambda2 == 0.0 && lambda3 == 0.0) {
    throw UsageError("loss weights must not all be zero");
  }
  if (!(epsilon0 > 0.0)) throw UsageError("epsilon0 must be positive");
}

double total_loss(const LossComponents& c, const LossWeights& w) {
  return w.lambda1 * c.pde + w.lambda2 * c.ic + w.lambda3 * c.bc;
}

DualModel dual_model(const nn::Surrogate& model) {
  return [&model](double a, double t) { return model.dual(a, t); };
}

double residual_of(const Dual2& p, double a_norm, const demo::Problem& problem) {
  const double mu = problem.mortality(problem.domain.age_of(a_norm));
  return p.dt + problem.equation.age * p.da + problem.equation.mortality * mu * p.value;
}

double pde_residual(const DualModel& model, Point point, const demo::Problem& problem) {
  const double r = residual_of(model(point.a, point.t), point.a, problem);
  if (!std::isfinite(r)) {
    std::ostringstream os;
    os << "non-finite PDE residual at (a_norm=" << point.a << ", t_norm=" << point.t << ")";
    throw NumericError(os.str());
  }
  return r;
}

namespace {
void require_nonempty(std::span<const Point> batch, const char* what) {
  if (batch.empty()) throw UsageError(std::string(what) + ": empty batch");
}
}  // namespace

double loss_pde(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem) {
  require_nonempty(batch, "loss_pde");
  double acc = 0.0;
  for (const auto& p : batch) {
    const double r = pde_residual(model, p, problem);
    acc += r * r;
  }
  return acc / static_cast<double>(batch.size());
}

double loss_ic(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem,
               double epsilon0) {
  require_nonempty(batch, "loss_ic");
  double acc = 0.0;
  for (const auto& p : batch) {
    const double ref = problem.profile(problem.domain.age_of(p.a));
    const double e = (model(p.a, 0.0).value - ref) / (ref + epsilon0);
    acc += e * e;
  }
  return acc / static_cast<double>(batch.size());
}

double loss_bc(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem) {
  require_nonempty(batch, "loss_bc");
  const auto& dom = problem.domain;
  double acc = 0.0;
  for (const auto& p : batch) {
    double births = 0.0;
    if (problem.policy) {
      births = demo::birth_integral(
          [&](double age) { return model(dom.normalize_age(age), p.t).value; }, dom.year_of(p.t),
          *problem.policy, problem.quadrature);
    }
    const double d = model(0.0, p.t).value - births;
    acc += d * d;
  }
  return acc / static_cast<double>(batch.size());
}

}  // namespace agepinn::train
