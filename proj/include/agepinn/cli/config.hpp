#pragma once

// Resolved run configuration. Every field has a key; the same key=value
// spelling is used by config files, manifests and (with dashes) CLI flags.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agepinn/demography/problem.hpp"
#include "agepinn/networks/surrogate.hpp"
#include "agepinn/reference/solver.hpp"
#include "agepinn/training/trainer.hpp"

namespace agepinn::cli {

struct RunConfig {
  std::string scenario;  // empty until set; "none" switches births off
  nn::ModelKind model = nn::ModelKind::mlp;
  std::uint64_t seed = 0;
  std::size_t epochs = 10000;
  double threshold = std::numeric_limits<double>::infinity();
  std::size_t n_interior = 5000;
  std::size_t m_initial = 2000;
  std::size_t k_boundary = 2000;
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  double epsilon0 = 1e-2;
  std::vector<std::size_t> widths = {2, 128, 128, 64, 1};
  std::size_t lstm_layers = 4;
  std::size_t lstm_hidden = 64;
  double dropout = 0.1;
  std::size_t quad_nodes = 61;
  std::size_t na = 201;
  std::size_t nt = 601;
  double a0 = 100.0;
  double t_min = 2024.0;
  double t_max = 2054.0;
  bool physical_aging = false;
  std::string profile;  // CSV path; empty selects the built-in profile
  std::size_t threads = 1;
  std::string out = "out";

  // Throws UsageError for an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  demo::Problem problem() const;
  train::TrainConfig train_config() const;
  nn::Surrogate make_model() const;
  ref::GridSpec grid() const { return {na, nt}; }
};

struct KeyInfo {
  std::string_view key;
  std::string_view help;
};

// All keys in manifest order.
const std::vector<KeyInfo>& config_keys();

// Flat key=value text with '#' comments and blank lines. Throws UsageError on
// an unknown key or malformed line and IoError if the file cannot be read.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin = "config");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Every key with its resolved value; readable back by apply_config_text.
std::string manifest_text(const RunConfig& cfg);

}  // namespace agepinn::cli
