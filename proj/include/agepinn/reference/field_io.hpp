#pragma once

#include <filesystem>
#include <vector>

#include "agepinn/reference/solver.hpp"

namespace agepinn::ref {

// Lattice values read back from a field CSV, age-major like Field.
struct FieldTable {
  std::vector<double> ages;
  std::vector<double> years;
  std::vector<double> values;

  bool same_lattice(const FieldTable& other) const {
    return ages == other.ages && years == other.years;
  }
};

FieldTable to_table(const Field& field);

// `age,year,density`, age outer, year inner. Throws IoError on failure.
void write_field_csv(const std::filesystem::path& path, const FieldTable& table);
void write_field_csv(const std::filesystem::path& path, const Field& field);
// Throws IoError for a missing header, ragged lattice or unparsable cell.
FieldTable read_field_csv(const std::filesystem::path& path);

}  // namespace agepinn::ref
