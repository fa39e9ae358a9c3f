#include "agepinn/demography/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "agepinn/demography/coefficients.hpp"
#include "agepinn/error.hpp"
#include "agepinn/text.hpp"

namespace agepinn::demo {

InitialProfile InitialProfile::default_profile() {
  return from_knots({{0.0, 0.85}, {20.0, 0.95}, {35.0, 1.00}, {60.0, 0.80}, {80.0, 0.45}, {100.0, 0.05}});
}

InitialProfile InitialProfile::from_knots(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw UsageError("profile: need at least two knots");
  InitialProfile p;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [age, dens] = knots[i];
    if (!std::isfinite(age) || !std::isfinite(dens)) throw UsageError("profile: non-finite knot");
    if (i > 0 && !(age > knots[i - 1].first)) {
      throw UsageError("profile: ages must be strictly increasing");
    }
    if (!(dens > 0.0)) throw UsageError("profile: densities must be strictly positive");
    p.ages_.push_back(age);
    p.densities_.push_back(dens);
  }
  return p;
}

void InitialProfile::require_covers(const Domain& domain) const {
  if (ages_.front() > 0.0 || ages_.back() < domain.a0) {
    throw UsageError("profile: knots must span [0, " + std::to_string(domain.a0) + "]");
  }
}

double InitialProfile::operator()(double age) const {
  if (!(age >= ages_.front() && age <= ages_.back())) {
    throw UsageError("profile: age " + std::to_string(age) + " outside knot range");
  }
  const auto it = std::upper_bound(ages_.begin(), ages_.end(), age);
  if (it == ages_.end()) return densities_.back();
  const std::size_t hi = static_cast<std::size_t>(it - ages_.begin());
  const std::size_t lo = hi - 1;
  const double w = (age - ages_[lo]) / (ages_[hi] - ages_[lo]);
  return densities_[lo] + w * (densities_[hi] - densities_[lo]);
}

double initial_density(double age, const InitialProfile& profile) { return profile(age); }

InitialProfile load_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != "age,density") {
    throw IoError("profile '" + path.string() + "': expected header 'age,density'");
  }
  std::vector<std::pair<double, double>> knots;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (cells.size() != 2) {
      throw IoError("profile '" + path.string() + "' line " + std::to_string(lineno) +
                    ": expected 2 columns");
    }
    knots.emplace_back(text::parse_double(cells[0]), text::parse_double(cells[1]));
  }
  try {
    return InitialProfile::from_knots(std::move(knots));
  } catch (const UsageError& e) {
    throw IoError("profile '" + path.string() + "': " + e.what());
  }
}

}  // namespace agepinn::demo
