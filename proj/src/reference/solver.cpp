#include "agepinn/reference/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "agepinn/error.hpp"

namespace agepinn::ref {

void check_cfl(const GridSpec& grid, const demo::Domain& domain, const demo::Equation& eq) {
  if (grid.na < 2 || grid.nt < 2) throw UsageError("grid: need at least 2 nodes per axis");
  const double da = grid.delta_age(domain);
  const double dt = grid.delta_time(domain);
  const double travel = eq.aging_speed(domain) * dt;
  if (travel > da) {
    std::ostringstream os;
    os << "CFL violated: aging speed " << eq.aging_speed(domain) << " x dt " << dt << " = "
       << travel << " exceeds da " << da;
    throw NumericError(os.str());
  }
}

std::vector<double> Field::column(std::size_t n) const {
  std::vector<double> col(grid.na);
  for (std::size_t i = 0; i < grid.na; ++i) col[i] = at(i, n);
  return col;
}

double interpolate_column(std::span<const double> column, double a0, double age) {
  const std::size_t na = column.size();
  const double pos = age / a0 * static_cast<double>(na - 1);
  if (pos <= 0.0) return column.front();
  if (pos >= static_cast<double>(na - 1)) return column.back();
  const auto lo = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(lo);
  return column[lo] + w * (column[lo + 1] - column[lo]);
}

Field solve_upwind(const demo::Problem& problem, const GridSpec& grid) {
  problem.validate();
  const auto& dom = problem.domain;
  check_cfl(grid, dom, problem.equation);
  Field f{grid, dom, std::vector<double>(grid.na * grid.nt, 0.0), 0};

  // Normalized steps: d(t_norm) and d(a_norm).
  const double dtau = 1.0 / static_cast<double>(grid.nt - 1);
  const double dahat = 1.0 / static_cast<double>(grid.na - 1);
  const double courant = problem.equation.age * dtau / dahat;
  std::vector<double> decay(grid.na);
  for (std::size_t i = 0; i < grid.na; ++i) {
    decay[i] = dtau * problem.equation.mortality * problem.mortality(f.age(i));
  }

  std::vector<double> cur(grid.na), next(grid.na);
  for (std::size_t i = 0; i < grid.na; ++i) cur[i] = problem.profile(f.age(i));
  for (std::size_t i = 0; i < grid.na; ++i) f.at(i, 0) = cur[i];

  for (std::size_t n = 0; n + 1 < grid.nt; ++n) {
    for (std::size_t i = 1; i < grid.na; ++i) {
      double v = cur[i] - courant * (cur[i] - cur[i - 1]) - decay[i] * cur[i];
      if (!std::isfinite(v)) {
        throw NumericError("upwind: non-finite density at age " + std::to_string(f.age(i)) +
                           ", year " + std::to_string(f.year(n + 1)));
      }
      if (v < 0.0) {
        v = 0.0;
        ++f.clamp_events;
      }
      next[i] = v;
    }
    next[0] = 0.0;
    if (problem.policy) {
      const double year = f.year(n + 1);
      next[0] = demo::birth_integral(
          [&](double age) { return interpolate_column(next, dom.a0, age); }, year,
          *problem.policy, problem.quadrature);
    }
    std::swap(cur, next);
    for (std::size_t i = 0; i < grid.na; ++i) f.at(i, n + 1) = cur[i];
  }
  return f;
}

double characteristic_solution(double age, double year, const demo::Problem& problem) {
  const auto& dom = problem.domain;
  const double elapsed = year - dom.t_min;
  const double speed = problem.equation.aging_speed(dom);
  const double origin = age - speed * elapsed;
  // Tolerate rounding right on the characteristic through the corner.
  if (origin < -1e-12 * dom.a0) {
    throw UsageError("characteristic_solution: (" + std::to_string(age) + ", " +
                     std::to_string(year) + ") traces back to the birth boundary");
  }
  const double start = std::max(origin, 0.0);
  if (elapsed == 0.0) return problem.profile(age);
  const double rate = problem.equation.mortality_per_year(dom) / speed;
  const auto& mu = problem.mortality;
  return problem.profile(start) * std::exp(-rate * (mu.integral(age) - mu.integral(start)));
}

double relative_l2(std::span<const double> a, std::span<const double> reference) {
  if (a.size() != reference.size()) throw UsageError("relative_l2: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - reference[k];
    num += d * d;
    den += reference[k] * reference[k];
  }
  if (den == 0.0) throw NumericError("relative_l2: reference has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

double relative_l2(const Field& a, const Field& reference) {
  if (a.grid.na != reference.grid.na || a.grid.nt != reference.grid.nt) {
    throw UsageError("relative_l2: grids differ");
  }
  return relative_l2(std::span<const double>(a.values), std::span<const double>(reference.values));
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("max_abs_difference: size mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace agepinn::ref
