#pragma once

// Problem-defining coefficients of the age-structured model:
//   dP/dt + alpha dP/da = -mu(a) P,   P(0,t) = int b(a,t) P(a,t) da,   P(a,t_min) = P0(a).

#include <string_view>
#include <vector>

namespace agepinn::demo {

struct Domain {
  double a0 = 100.0;       // years
  double t_min = 2024.0;   // calendar year
  double t_max = 2054.0;

  double duration() const { return t_max - t_min; }
  // Time-age scaling factor (t_max - t_min) / a0.
  double alpha() const { return duration() / a0; }
  double age_of(double a_norm) const { return a_norm * a0; }
  double year_of(double t_norm) const { return t_min + t_norm * duration(); }
  double normalize_age(double a) const { return a / a0; }
  double normalize_time(double t) const { return (t - t_min) / duration(); }
  // Throws UsageError unless a0 > 0 and t_max > t_min.
  void validate() const;
};

struct MortalityModel {
  double mu0 = 0.006805083;  // 1/year
  double slope = 0.0003;     // 1/year^2
  double breakpoint = 60.0;  // years
  double exp_rate = 0.06;    // 1/year

  // Linear below the breakpoint, exponential growth from the breakpoint value above.
  double operator()(double age) const;
  // Closed-form antiderivative, zero at age 0.
  double integral(double age) const;
};

// mu(a) with a domain check; throws UsageError for a outside [0, a0].
double mortality(double age, const MortalityModel& model = {}, const Domain& domain = {});

// 0.0022 (a-20)(35-a) on [20, 35], zero elsewhere.
double base_asfr(double age);

inline constexpr double kFertilityLow = 20.0;
inline constexpr double kFertilityHigh = 35.0;

enum class PolicyName { three_child, separate_two_child, universal_two_child };

struct PolicyStep {
  double year;
  double increment;
};

struct PolicyScenario {
  PolicyName name = PolicyName::three_child;
  std::vector<PolicyStep> steps;
  double cap = 0.25;

  static PolicyScenario make(PolicyName name);
  // 1 + sum of increments whose year <= t.
  double multiplier(double year) const;
};

std::string_view policy_name(PolicyName name);  // kebab-case CLI spelling
// Accepts the kebab-case names and "two-child" as an alias of separate-two-child.
PolicyName parse_policy(std::string_view name);

// min(base_asfr(a) * multiplier(t), cap).
double fertility(double age, double year, const PolicyScenario& scenario);

// Coefficients of the residual in normalized coordinates (a_norm, t_norm):
//   dP/dt_norm + age * dP/da_norm + mortality * mu(a0 a_norm) P = 0.
struct Equation {
  double age = 0.3;
  double mortality = 1.0;

  // The model equation taken literally in the normalized coordinates the
  // surrogates use: age coefficient alpha, unscaled mortality.
  static Equation as_printed(const Domain& domain);
  // dP/dt + dP/da = -mu P in years: one year of age per year, mu per year.
  static Equation physical_aging(const Domain& domain);

  // Aging speed in years of age per calendar year.
  double aging_speed(const Domain& d) const { return age * d.a0 / d.duration(); }
  // Mortality multiplier per calendar year.
  double mortality_per_year(const Domain& d) const { return mortality / d.duration(); }
};

}  // namespace agepinn::demo
