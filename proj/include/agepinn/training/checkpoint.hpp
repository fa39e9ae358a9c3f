#pragma once

// Binary checkpoint: "PFCK", u32 version, u32 metadata length, metadata as
// key=value lines, u64 parameter count, parameters as little-endian f64.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "agepinn/demography/coefficients.hpp"
#include "agepinn/networks/surrogate.hpp"

namespace agepinn::train {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nn::Surrogate model;
  demo::Domain domain;
  demo::Equation equation;
  std::string scenario;  // policy name, or "none" without births
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::string loss_history;  // file name of the loss log, may be empty
};

// Throws IoError when the file cannot be written.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);

// Throws IoError for a missing or malformed file, a wrong magic or version,
// and UsageError when `expected` is given and the stored kind differs.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           std::optional<nn::ModelKind> expected = std::nullopt);

}  // namespace agepinn::train
