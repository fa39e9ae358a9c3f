#include "agepinn/training/loss_log.hpp"

#include <sstream>

#include "agepinn/error.hpp"
#include "agepinn/text.hpp"

namespace agepinn::train {

namespace {
constexpr const char* kHeader = "epoch,total,pde,ic,bc";
}

LossLogWriter::LossLogWriter(const std::filesystem::path& path) : path_(path), os_(path, std::ios::trunc) {
  if (!os_) throw IoError("cannot write " + path.string());
  os_ << kHeader << '\n';
}

void LossLogWriter::append(const EpochRecord& r) {
  os_ << r.epoch << ',' << text::format_double(r.total) << ',' << text::format_double(r.pde) << ','
      << text::format_double(r.ic) << ',' << text::format_double(r.bc) << '\n';
  if (!os_) throw IoError("failed writing " + path_.string());
}

void LossLogWriter::close() {
  os_.close();
  if (!os_) throw IoError("failed closing " + path_.string());
}

std::vector<EpochRecord> read_loss_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != kHeader) {
    throw IoError(path.string() + ": expected header '" + kHeader + "'");
  }
  std::vector<EpochRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(text::trim(line), ',');
    if (cells.size() != 5) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 5 columns");
    EpochRecord r;
    r.epoch = static_cast<std::size_t>(text::parse_double(cells[0]));
    r.total = text::parse_double(cells[1]);
    r.pde = text::parse_double(cells[2]);
    r.ic = text::parse_double(cells[3]);
    r.bc = text::parse_double(cells[4]);
    out.push_back(r);
  }
  return out;
}

}  // namespace agepinn::train
