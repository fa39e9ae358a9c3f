#pragma once

// Loss log CSV: header `epoch,total,pde,ic,bc`, one row per epoch.

#include <filesystem>
#include <fstream>
#include <vector>

#include "agepinn/training/trainer.hpp"

namespace agepinn::train {

class LossLogWriter {
 public:
  // Truncates `path` and writes the header. Throws IoError.
  explicit LossLogWriter(const std::filesystem::path& path);
  void append(const EpochRecord& rec);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream os_;
};

// Throws IoError on a missing header or malformed row.
std::vector<EpochRecord> read_loss_log(const std::filesystem::path& path);

}  // namespace agepinn::train
