#pragma once

// Classical solutions of the age-structured model, used as the oracle for the
// trained surrogates: an explicit first-order upwind scheme for the full
// problem and the method-of-characteristics solution for b = 0.

#include <cstddef>
#include <span>
#include <vector>

#include "agepinn/demography/problem.hpp"

namespace agepinn::ref {

struct GridSpec {
  std::size_t na = 201;  // age nodes over [0, a0]
  std::size_t nt = 601;  // time nodes over [t_min, t_max]

  double delta_age(const demo::Domain& d) const { return d.a0 / static_cast<double>(na - 1); }
  double delta_time(const demo::Domain& d) const {
    return d.duration() / static_cast<double>(nt - 1);
  }
};

// Throws UsageError for fewer than 2 nodes per axis and NumericError when the
// aging speed times dt exceeds da; the message names both steps.
void check_cfl(const GridSpec& grid, const demo::Domain& domain, const demo::Equation& eq);

// Dense na x nt density grid, age-major: values[i * nt + n] is P(a_i, t_n).
struct Field {
  GridSpec grid;
  demo::Domain domain;
  std::vector<double> values;
  std::size_t clamp_events = 0;

  double age(std::size_t i) const { return domain.a0 * static_cast<double>(i) / static_cast<double>(grid.na - 1); }
  double year(std::size_t n) const {
    return domain.t_min + domain.duration() * static_cast<double>(n) / static_cast<double>(grid.nt - 1);
  }
  double& at(std::size_t i, std::size_t n) { return values[i * grid.nt + n]; }
  double at(std::size_t i, std::size_t n) const { return values[i * grid.nt + n]; }
  // Density over age at time node n.
  std::vector<double> column(std::size_t n) const;
};

// Upwind in age, explicit in time. Column 0 is the initial profile; for each
// step the interior ages advance first and the age-0 node is then set to the
// birth integral over the freshly computed column. Negative values are
// clamped to 0 and counted. Throws NumericError on CFL violation or a
// non-finite update.
Field solve_upwind(const demo::Problem& problem, const GridSpec& grid);

// Linear interpolation of a uniform age column at `age`.
double interpolate_column(std::span<const double> column, double a0, double age);

// Exact solution without births at a point whose characteristic reaches back
// to the initial line. Throws UsageError when it traces to the birth boundary.
double characteristic_solution(double age, double year, const demo::Problem& problem);

// ||A - B|| / ||B|| with B the reference. Throws UsageError on a size
// mismatch and NumericError when ||B|| = 0.
double relative_l2(std::span<const double> a, std::span<const double> reference);
double relative_l2(const Field& a, const Field& reference);
double max_abs_difference(std::span<const double> a, std::span<const double> b);

}  // namespace agepinn::ref
