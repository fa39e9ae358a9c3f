#include "agepinn/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "agepinn/cli/config.hpp"
#include "agepinn/cli/svg.hpp"
#include "agepinn/error.hpp"
#include "agepinn/reference/field_io.hpp"
#include "agepinn/simd/kernels.hpp"
#include "agepinn/text.hpp"
#include "agepinn/training/checkpoint.hpp"
#include "agepinn/training/loss_log.hpp"

namespace agepinn::cli {
namespace fs = std::filesystem;
namespace {

const std::vector<std::string_view> kTrainKeys = {
    "scenario", "model",    "seed",     "epochs",     "threshold",   "n_interior", "m_initial",
    "k_boundary", "lr",     "beta1",    "beta2",      "adam_eps",    "lambda1",    "lambda2",
    "lambda3",  "epsilon0", "widths",   "lstm_layers", "lstm_hidden", "dropout",   "quad_nodes",
    "a0",       "t_min",    "t_max",    "profile",    "threads",     "out"};
const std::vector<std::string_view> kReferenceKeys = {"scenario", "quad_nodes", "na", "nt", "a0", "t_min",
                                                      "t_max", "profile", "out"};
const std::vector<std::string_view> kPredictKeys = {"na", "nt", "out"};
const std::vector<std::string_view> kPlotKeys = {"out"};

std::string dashed(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string_view help_of(std::string_view key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return k.help;
  }
  return {};
}

// Flags that map onto config keys. Values are kept as text and applied after
// the config file so the command line wins.
struct KeyFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool physical_aging = false;
  CLI::Option* physical_aging_flag = nullptr;
  std::string config_path;

  void add(CLI::App* app, const std::vector<std::string_view>& keys, bool with_config, bool with_aging) {
    for (auto key : keys) {
      const std::string k(key);
      options[k] = app->add_option("--" + dashed(key), values[k], std::string(help_of(key)));
    }
    if (with_aging) {
      physical_aging_flag = app->add_flag("--physical-aging", physical_aging, std::string(help_of("physical_aging")));
    }
    if (with_config) app->add_option("--config", config_path, "key=value config file");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& k : config_keys()) {
      const std::string key(k.key);
      if (auto it = options.find(key); it != options.end() && it->second->count() > 0) cfg.set(key, values.at(key));
    }
    if (physical_aging_flag && physical_aging_flag->count() > 0) cfg.physical_aging = true;
    return cfg;
  }
};

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << body;
  if (!os) throw IoError("failed writing " + path.string());
}

int cmd_train(const KeyFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = flags.resolve();
  if (cfg.scenario.empty()) throw UsageError("train: --scenario is required");
  const demo::Problem problem = cfg.problem();
  const train::TrainConfig tc = cfg.train_config();
  nn::Surrogate model = cfg.make_model();
  const fs::path dir = prepare_out(cfg);

  write_text(dir / "manifest.txt", manifest_text(cfg));
  train::LossLogWriter log(dir / "loss.csv");
  const std::size_t every = std::max<std::size_t>(1, cfg.epochs / 20);
  const auto result = train::train(model, problem, tc, [&](const train::EpochRecord& r) {
    log.append(r);
    if (r.epoch % every == 0 || r.epoch == 1) {
      err << "epoch " << r.epoch << "/" << cfg.epochs << " total=" << text::format_double(r.total) << '\n';
    }
  });
  log.close();

  train::Checkpoint cp;
  cp.model = model;
  cp.domain = problem.domain;
  cp.equation = problem.equation;
  cp.scenario = cfg.scenario;
  cp.seed = cfg.seed;
  cp.epoch = result.history.size();
  cp.loss_history = "loss.csv";
  train::save_checkpoint(dir / "checkpoint.pfck", cp);

  out << "epochs=" << result.history.size();
  if (!result.history.empty()) out << " final_total=" << text::format_double(result.history.back().total);
  if (result.stopped_early) out << " stopped_early=1";
  out << '\n';
  return kOk;
}

int cmd_reference(const KeyFlags& flags, std::ostream& out) {
  RunConfig cfg = flags.resolve();
  if (cfg.scenario.empty()) cfg.scenario = std::string(demo::policy_name(demo::PolicyName::three_child));
  const demo::Problem problem = cfg.problem();
  const ref::Field field = ref::solve_upwind(problem, cfg.grid());
  const fs::path dir = prepare_out(cfg);
  ref::write_field_csv(dir / "field.csv", field);
  out << "na=" << cfg.na << " nt=" << cfg.nt << " clamp_events=" << field.clamp_events << '\n';
  return kOk;
}

int cmd_predict(const KeyFlags& flags, const std::string& checkpoint, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  if (cfg.na < 2 || cfg.nt < 2) throw UsageError("predict: --na and --nt must be at least 2");
  const train::Checkpoint cp = train::load_checkpoint(checkpoint);
  ref::FieldTable table;
  const auto& d = cp.domain;
  for (std::size_t i = 0; i < cfg.na; ++i) {
    table.ages.push_back(d.a0 * static_cast<double>(i) / static_cast<double>(cfg.na - 1));
  }
  for (std::size_t n = 0; n < cfg.nt; ++n) {
    table.years.push_back(d.t_min + d.duration() * static_cast<double>(n) / static_cast<double>(cfg.nt - 1));
  }
  table.values.reserve(cfg.na * cfg.nt);
  for (double a : table.ages) {
    for (double t : table.years) {
      const double v = cp.model.value(d.normalize_age(a), d.normalize_time(t));
      if (!std::isfinite(v)) throw NumericError("non-finite prediction at age " + text::format_double(a));
      table.values.push_back(v);
    }
  }
  const fs::path dir = prepare_out(cfg);
  ref::write_field_csv(dir / "field.csv", table);
  out << "na=" << cfg.na << " nt=" << cfg.nt << " model=" << nn::model_kind_name(cp.model.kind()) << '\n';
  return kOk;
}

int cmd_compare(const std::string& field, const std::string& reference, std::ostream& out) {
  const auto a = ref::read_field_csv(field);
  const auto b = ref::read_field_csv(reference);
  if (!a.same_lattice(b)) throw UsageError("compare: fields are on different lattices");
  out << "rel_l2=" << text::format_double(ref::relative_l2(a.values, b.values))
      << " max_abs=" << text::format_double(ref::max_abs_difference(a.values, b.values)) << '\n';
  return kOk;
}

int cmd_plot(const KeyFlags& flags, const std::string& input, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  std::ifstream in(input);
  if (!in) throw IoError("cannot read " + input);
  std::string first;
  std::getline(in, first);
  in.close();
  std::string svg;
  if (text::trim(first) == "epoch,total,pde,ic,bc") {
    const auto history = train::read_loss_log(input);
    if (history.empty()) throw IoError(input + ": no loss rows");
    svg = loss_chart_svg(history);
  } else {
    const auto table = ref::read_field_csv(input);
    if (table.values.empty()) throw IoError(input + ": no field rows");
    svg = field_heatmap_svg(table);
  }
  const fs::path dir = prepare_out(cfg);
  write_text(dir / "plot.svg", svg);
  out << "wrote " << (dir / "plot.svg").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Physics-informed surrogates for an age-structured population model", "agepinn"};
  app.require_subcommand(1);
  std::string simd;
  auto* simd_opt = app.add_option("--simd", simd, "kernel set: auto | scalar | avx2");

  KeyFlags train_flags, reference_flags, predict_flags, plot_flags;
  auto* train_cmd = app.add_subcommand("train", "train a surrogate; writes loss.csv, checkpoint.pfck, manifest.txt");
  train_flags.add(train_cmd, kTrainKeys, true, true);

  auto* reference_cmd = app.add_subcommand("reference", "upwind finite-difference solution; writes field.csv");
  reference_flags.add(reference_cmd, kReferenceKeys, true, true);

  std::string checkpoint;
  auto* predict_cmd = app.add_subcommand("predict", "evaluate a checkpoint on a lattice; writes field.csv");
  predict_flags.add(predict_cmd, kPredictKeys, false, false);
  predict_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  std::string field_a, field_b;
  auto* compare_cmd = app.add_subcommand("compare", "relative L2 and max-abs difference of two field CSVs");
  compare_cmd->add_option("field", field_a, "field CSV")->required();
  compare_cmd->add_option("reference", field_b, "reference field CSV")->required();

  std::string plot_input;
  auto* plot_cmd = app.add_subcommand("plot", "render a loss or field CSV as plot.svg");
  plot_flags.add(plot_cmd, kPlotKeys, false, false);
  plot_cmd->add_option("input", plot_input, "loss.csv or field.csv")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simd_opt->count() > 0) simd::set_active_isa(simd::parse_isa(simd));
    if (*train_cmd) return cmd_train(train_flags, out, err);
    if (*reference_cmd) return cmd_reference(reference_flags, out);
    if (*predict_cmd) return cmd_predict(predict_flags, checkpoint, out);
    if (*compare_cmd) return cmd_compare(field_a, field_b, out);
    if (*plot_cmd) return cmd_plot(plot_flags, plot_input, out);
  } catch (const UsageError& e) {
    err << "agepinn: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "agepinn: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    err << "agepinn: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "agepinn: internal error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}

}  // namespace agepinn::cli
