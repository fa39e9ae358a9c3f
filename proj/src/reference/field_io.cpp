#include "agepinn/reference/field_io.hpp"

#include <fstream>
#include <string>

#include "agepinn/error.hpp"
#include "agepinn/text.hpp"

namespace agepinn::ref {

FieldTable to_table(const Field& field) {
  FieldTable t;
  for (std::size_t i = 0; i < field.grid.na; ++i) t.ages.push_back(field.age(i));
  for (std::size_t n = 0; n < field.grid.nt; ++n) t.years.push_back(field.year(n));
  t.values = field.values;
  return t;
}

void write_field_csv(const std::filesystem::path& path, const FieldTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "age,year,density\n";
  std::size_t k = 0;
  for (double a : table.ages) {
    const std::string as = text::format_double(a);
    for (double y : table.years) {
      out << as << ',' << text::format_double(y) << ',' << text::format_double(table.values[k++])
          << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_field_csv(const std::filesystem::path& path, const Field& field) {
  write_field_csv(path, to_table(field));
}

FieldTable read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != "age,year,density") {
    throw IoError("'" + path.string() + "': expected header 'age,year,density'");
  }
  FieldTable t;
  std::vector<double> ages_col, years_col;
  std::size_t lineno = 1;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (text::trim(line).empty()) continue;
      const auto cells = text::split(line, ',');
      if (cells.size() != 3) throw IoError("expected 3 columns");
      ages_col.push_back(text::parse_double(cells[0]));
      years_col.push_back(text::parse_double(cells[1]));
      t.values.push_back(text::parse_double(cells[2]));
    }
  } catch (const IoError& e) {
    throw IoError("'" + path.string() + "' line " + std::to_string(lineno) + ": " + e.what());
  }
  if (t.values.empty()) throw IoError("'" + path.string() + "': no data rows");
  // Recover the lattice: years repeat within each age block.
  std::size_t nt = 1;
  while (nt < ages_col.size() && ages_col[nt] == ages_col[0]) ++nt;
  if (t.values.size() % nt != 0) throw IoError("'" + path.string() + "': ragged lattice");
  const std::size_t na = t.values.size() / nt;
  for (std::size_t n = 0; n < nt; ++n) t.years.push_back(years_col[n]);
  for (std::size_t i = 0; i < na; ++i) {
    t.ages.push_back(ages_col[i * nt]);
    for (std::size_t n = 0; n < nt; ++n) {
      if (ages_col[i * nt + n] != t.ages.back() || years_col[i * nt + n] != t.years[n]) {
        throw IoError("'" + path.string() + "': rows are not a rectangular age-major lattice");
      }
    }
  }
  return t;
}

}  // namespace agepinn::ref
