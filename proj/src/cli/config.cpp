#include "agepinn/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "agepinn/demography/profile.hpp"
#include "agepinn/error.hpp"
#include "agepinn/text.hpp"

namespace agepinn::cli {
namespace {

std::string bad(std::string_view key, std::string_view value) {
  return "invalid value for " + std::string(key) + ": '" + std::string(value) + "'";
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  v = text::trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) throw UsageError(bad(key, v));
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = text::trim(v);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    return text::parse_double(v);
  } catch (const IoError&) {
    throw UsageError(bad(key, v));
  }
}

bool to_bool(std::string_view key, std::string_view v) {
  v = text::trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError(bad(key, v));
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string fmt(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  return text::format_double(v);
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"scenario", "three-child | separate-two-child | universal-two-child | none"},
      {"model", "pinn | lstm-pinn"},
      {"seed", "sampler and initialization seed"},
      {"epochs", "epoch cap"},
      {"threshold", "stop once the total loss is below this (inf disables)"},
      {"n_interior", "interior collocation points per epoch"},
      {"m_initial", "initial-line points per epoch"},
      {"k_boundary", "birth-boundary points per epoch"},
      {"lr", "Adam learning rate"},
      {"beta1", "Adam first-moment decay"},
      {"beta2", "Adam second-moment decay"},
      {"adam_eps", "Adam denominator guard"},
      {"lambda1", "PDE residual loss weight"},
      {"lambda2", "initial condition loss weight"},
      {"lambda3", "birth boundary loss weight"},
      {"epsilon0", "initial condition loss denominator guard"},
      {"widths", "feed-forward layer widths, comma separated"},
      {"lstm_layers", "stacked LSTM layers"},
      {"lstm_hidden", "LSTM units per layer"},
      {"dropout", "dropout rate between LSTM layers"},
      {"quad_nodes", "trapezoid nodes on the fertile ages"},
      {"na", "age nodes of the field grid"},
      {"nt", "time nodes of the field grid"},
      {"a0", "maximum age"},
      {"t_min", "first year"},
      {"t_max", "last year"},
      {"physical_aging", "one year of age per year and mortality per year"},
      {"profile", "initial profile CSV (age,density); empty for the built-in"},
      {"threads", "training worker threads"},
      {"out", "output directory"},
  };
  return keys;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v(text::trim(value));
  if (key == "scenario") {
    scenario = v == "none" ? v : std::string(demo::policy_name(demo::parse_policy(v)));
  } else if (key == "model") {
    model = nn::parse_model_kind(v);
  } else if (key == "seed") {
    seed = to_u64(key, v);
  } else if (key == "epochs") {
    epochs = to_u64(key, v);
  } else if (key == "threshold") {
    threshold = to_double(key, v);
  } else if (key == "n_interior") {
    n_interior = to_u64(key, v);
  } else if (key == "m_initial") {
    m_initial = to_u64(key, v);
  } else if (key == "k_boundary") {
    k_boundary = to_u64(key, v);
  } else if (key == "lr") {
    lr = to_double(key, v);
  } else if (key == "beta1") {
    beta1 = to_double(key, v);
  } else if (key == "beta2") {
    beta2 = to_double(key, v);
  } else if (key == "adam_eps") {
    adam_eps = to_double(key, v);
  } else if (key == "lambda1") {
    lambda1 = to_double(key, v);
  } else if (key == "lambda2") {
    lambda2 = to_double(key, v);
  } else if (key == "lambda3") {
    lambda3 = to_double(key, v);
  } else if (key == "epsilon0") {
    epsilon0 = to_double(key, v);
  } else if (key == "widths") {
    std::vector<std::size_t> w;
    for (auto part : text::split(v, ',')) w.push_back(to_u64(key, part));
    widths = std::move(w);
  } else if (key == "lstm_layers") {
    lstm_layers = to_u64(key, v);
  } else if (key == "lstm_hidden") {
    lstm_hidden = to_u64(key, v);
  } else if (key == "dropout") {
    dropout = to_double(key, v);
  } else if (key == "quad_nodes") {
    quad_nodes = to_u64(key, v);
  } else if (key == "na") {
    na = to_u64(key, v);
  } else if (key == "nt") {
    nt = to_u64(key, v);
  } else if (key == "a0") {
    a0 = to_double(key, v);
  } else if (key == "t_min") {
    t_min = to_double(key, v);
  } else if (key == "t_max") {
    t_max = to_double(key, v);
  } else if (key == "physical_aging") {
    physical_aging = to_bool(key, v);
  } else if (key == "profile") {
    profile = v;
  } else if (key == "threads") {
    threads = to_u64(key, v);
  } else if (key == "out") {
    out = v;
  } else {
    throw UsageError("unknown config key '" + std::string(key) + "'");
  }
}

std::string RunConfig::get(std::string_view key) const {
  if (key == "scenario") return scenario;
  if (key == "model") return std::string(nn::model_kind_name(model));
  if (key == "seed") return std::to_string(seed);
  if (key == "epochs") return std::to_string(epochs);
  if (key == "threshold") return fmt(threshold);
  if (key == "n_interior") return std::to_string(n_interior);
  if (key == "m_initial") return std::to_string(m_initial);
  if (key == "k_boundary") return std::to_string(k_boundary);
  if (key == "lr") return fmt(lr);
  if (key == "beta1") return fmt(beta1);
  if (key == "beta2") return fmt(beta2);
  if (key == "adam_eps") return fmt(adam_eps);
  if (key == "lambda1") return fmt(lambda1);
  if (key == "lambda2") return fmt(lambda2);
  if (key == "lambda3") return fmt(lambda3);
  if (key == "epsilon0") return fmt(epsilon0);
  if (key == "widths") return join(widths);
  if (key == "lstm_layers") return std::to_string(lstm_layers);
  if (key == "lstm_hidden") return std::to_string(lstm_hidden);
  if (key == "dropout") return fmt(dropout);
  if (key == "quad_nodes") return std::to_string(quad_nodes);
  if (key == "na") return std::to_string(na);
  if (key == "nt") return std::to_string(nt);
  if (key == "a0") return fmt(a0);
  if (key == "t_min") return fmt(t_min);
  if (key == "t_max") return fmt(t_max);
  if (key == "physical_aging") return physical_aging ? "true" : "false";
  if (key == "profile") return profile;
  if (key == "threads") return std::to_string(threads);
  if (key == "out") return out;
  throw UsageError("unknown config key '" + std::string(key) + "'");
}

demo::Problem RunConfig::problem() const {
  demo::Domain domain{a0, t_min, t_max};
  domain.validate();
  demo::Problem p = scenario.empty() || scenario == "none"
                        ? demo::Problem::without_births(domain)
                        : demo::Problem::make(demo::parse_policy(scenario), domain);
  if (physical_aging) p.equation = demo::Equation::physical_aging(domain);
  if (!profile.empty()) p.profile = demo::load_profile_csv(profile);
  p.quadrature = demo::Quadrature(quad_nodes);
  p.validate();
  return p;
}

train::TrainConfig RunConfig::train_config() const {
  train::TrainConfig c;
  c.sampler = {n_interior, m_initial, k_boundary, seed};
  c.adam = {lr, beta1, beta2, adam_eps};
  c.weights = {lambda1, lambda2, lambda3, epsilon0};
  c.epochs = epochs;
  c.threshold = threshold;
  c.threads = threads;
  c.validate();
  return c;
}

nn::Surrogate RunConfig::make_model() const {
  if (model == nn::ModelKind::mlp) return nn::Surrogate(nn::mlp_init(widths, seed));
  nn::validate(nn::DropoutSpec{dropout});
  return nn::Surrogate(nn::lstm_init(lstm_layers, lstm_hidden, seed), dropout);
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  for (auto line : text::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(std::string(origin) + ":" + std::to_string(line_no) + ": expected key=value");
    }
    try {
      cfg.set(text::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

std::string manifest_text(const RunConfig& cfg) {
  std::string s = "# resolved run configuration\n";
  for (const auto& k : config_keys()) s += std::string(k.key) + "=" + cfg.get(k.key) + "\n";
  return s;
}

}  // namespace agepinn::cli
