#pragma once

#include <optional>

#include "agepinn/demography/coefficients.hpp"
#include "agepinn/demography/profile.hpp"
#include "agepinn/demography/quadrature.hpp"

namespace agepinn::demo {

// Everything that defines one forward problem. An empty `policy` switches
// births off (b = 0).
struct Problem {
  Domain domain;
  MortalityModel mortality;
  Equation equation = Equation::as_printed(Domain{});
  std::optional<PolicyScenario> policy = PolicyScenario::make(PolicyName::three_child);
  InitialProfile profile = InitialProfile::default_profile();
  Quadrature quadrature;

  static Problem make(PolicyName policy, const Domain& domain = {});
  static Problem without_births(const Domain& domain = {});

  // Throws UsageError for an invalid domain or a profile not spanning it.
  void validate() const;
};

}  // namespace agepinn::demo
