#include "agepinn/demography/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agepinn/error.hpp"

namespace agepinn::demo {

void Domain::validate() const {
  if (!(a0 > 0.0)) throw UsageError("domain: a0 must be positive");
  if (!(t_max > t_min)) throw UsageError("domain: t_max must exceed t_min");
}

double MortalityModel::operator()(double age) const {
  if (age < breakpoint) return mu0 + slope * age;
  return (mu0 + slope * breakpoint) * std::exp(exp_rate * (age - breakpoint));
}

double MortalityModel::integral(double age) const {
  const double lo = std::min(age, breakpoint);
  double acc = mu0 * lo + 0.5 * slope * lo * lo;
  if (age > breakpoint) {
    const double c = mu0 + slope * breakpoint;
    acc += (c / exp_rate) * std::expm1(exp_rate * (age - breakpoint));
  }
  return acc;
}

double mortality(double age, const MortalityModel& model, const Domain& domain) {
  if (!(age >= 0.0 && age <= domain.a0)) {
    throw UsageError("mortality: age " + std::to_string(age) + " outside [0, a0]");
  }
  return model(age);
}

double base_asfr(double age) {
  if (age < kFertilityLow || age > kFertilityHigh) return 0.0;
  return 0.0022 * (age - kFertilityLow) * (kFertilityHigh - age);
}

PolicyScenario PolicyScenario::make(PolicyName name) {
  switch (name) {
    case PolicyName::three_child:
      return {name, {{2014.0, 0.2}, {2016.0, 0.2}, {2021.0, 0.2}}, 0.25};
    case PolicyName::separate_two_child:
      return {name, {{2024.0, 0.2}}, 0.20};
    case PolicyName::universal_two_child:
      return {name, {{2024.0, 0.2}}, 0.25};
  }
  throw UsageError("unknown policy");
}

double PolicyScenario::multiplier(double year) const {
  double m = 1.0;
  for (const auto& s : steps) {
    if (year >= s.year) m += s.increment;
  }
  return m;
}

std::string_view policy_name(PolicyName name) {
  switch (name) {
    case PolicyName::three_child:
      return "three-child";
    case PolicyName::separate_two_child:
      return "separate-two-child";
    case PolicyName::universal_two_child:
      return "universal-two-child";
  }
  return "?";
}

PolicyName parse_policy(std::string_view name) {
  if (name == "three-child") return PolicyName::three_child;
  if (name == "separate-two-child" || name == "two-child") return PolicyName::separate_two_child;
  if (name == "universal-two-child") return PolicyName::universal_two_child;
  throw UsageError("unknown scenario '" + std::string(name) +
                   "' (expected three-child|separate-two-child|universal-two-child)");
}

double fertility(double age, double year, const PolicyScenario& scenario) {
  return std::min(base_asfr(age) * scenario.multiplier(year), scenario.cap);
}

Equation Equation::as_printed(const Domain& domain) { return {domain.alpha(), 1.0}; }

Equation Equation::physical_aging(const Domain& domain) {
  return {domain.duration() / domain.a0, domain.duration()};
}

}  // namespace agepinn::demo

#include "agepinn/demography/problem.hpp"

namespace agepinn::demo {

Problem Problem::make(PolicyName policy, const Domain& domain) {
  Problem p;
  p.domain = domain;
  p.equation = Equation::as_printed(domain);
  p.policy = PolicyScenario::make(policy);
  return p;
}

Problem Problem::without_births(const Domain& domain) {
  Problem p = make(PolicyName::three_child, domain);
  p.policy.reset();
  return p;
}

void Problem::validate() const {
  domain.validate();
  profile.require_covers(domain);
}

}  // namespace agepinn::demo
