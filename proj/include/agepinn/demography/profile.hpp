#pragma once

#include <filesystem>
#include <utility>
#include <vector>

namespace agepinn::demo {

struct Domain;

// Piecewise-linear initial age distribution P0(a).
class InitialProfile {
 public:
  // (0,0.85) (20,0.95) (35,1.00) (60,0.80) (80,0.45) (100,0.05)
  static InitialProfile default_profile();
  // Throws UsageError for fewer than two knots, non-increasing ages or
  // non-positive densities.
  static InitialProfile from_knots(std::vector<std::pair<double, double>> knots);

  const std::vector<double>& ages() const { return ages_; }
  const std::vector<double>& densities() const { return densities_; }

  // Throws UsageError unless the knots span [0, a0].
  void require_covers(const Domain& domain) const;

  // Linear interpolation; throws UsageError outside the knot range.
  double operator()(double age) const;

 private:
  std::vector<double> ages_;
  std::vector<double> densities_;
};

double initial_density(double age, const InitialProfile& profile);

// CSV with header `age,density`. Throws IoError on unreadable or malformed input.
InitialProfile load_profile_csv(const std::filesystem::path& path);

}  // namespace agepinn::demo
