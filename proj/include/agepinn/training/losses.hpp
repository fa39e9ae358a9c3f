#pragma once

// The three loss components, evaluated on any density model given as a
// callable of the normalized coordinates.
//   pde: mean of r^2,  r = dP/dt_norm + c_age dP/da_norm + c_mort mu(a) P
//   ic:  mean of ((P(a,0) - P0(a)) / (P0(a) + eps0))^2
//   bc:  mean of (P(0,t) - int b(a,t) P(a,t) da)^2

#include <functional>
#include <span>

#include "agepinn/autodiff/dual2.hpp"
#include "agepinn/demography/problem.hpp"
#include "agepinn/training/sampler.hpp"

namespace agepinn::nn {
class Surrogate;
}

namespace agepinn::train {

struct LossWeights {
  double lambda1 = 1.0;  // pde
  double lambda2 = 1.0;  // initial condition
  double lambda3 = 1.0;  // birth boundary
  double epsilon0 = 1e-2;

  // Throws UsageError for negative weights, all-zero weights or eps0 <= 0.
  void validate() const;
};

struct LossComponents {
  double pde = 0.0;
  double ic = 0.0;
  double bc = 0.0;
};

double total_loss(const LossComponents& c, const LossWeights& w);

// Value and input tangents at a normalized point.
using DualModel = std::function<Dual2(double a_norm, double t_norm)>;

DualModel dual_model(const nn::Surrogate& model);

// Residual from a Dual2 model output at normalized age a_norm.
double residual_of(const Dual2& p, double a_norm, const demo::Problem& problem);

// Throws NumericError naming the point if the residual is not finite.
double pde_residual(const DualModel& model, Point point, const demo::Problem& problem);

// All three throw UsageError on an empty batch.
double loss_pde(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem);
double loss_ic(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem,
               double epsilon0);
double loss_bc(const DualModel& model, std::span<const Point> batch, const demo::Problem& problem);

}  // namespace agepinn::train
