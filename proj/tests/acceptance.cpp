// Prints one PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agepinn/autodiff/grad_check.hpp"
#include "agepinn/cli/config.hpp"
#include "agepinn/demography/problem.hpp"
#include "agepinn/reference/solver.hpp"
#include "agepinn/training/loss_log.hpp"
#include "agepinn/training/trainer.hpp"

using namespace agepinn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(x), 1e-12); }

// ---- 1: gradient and tangent fidelity

double loss_gradient_error(const nn::Surrogate& model, const demo::Problem& problem, bool train_mode,
                           std::uint64_t seed) {
  const train::SamplerConfig sc{10, 10, 10, seed};
  const auto b = train::Batches::sample(sc, 1);
  const train::LossWeights w;
  const auto ev = train::evaluate_loss(model, problem, b, w, train_mode, seed, 1);
  const std::vector<double> theta(model.parameters().begin(), model.parameters().end());
  return grad_check(
      [&](std::span<const double> th) {
        nn::Surrogate m = model;
        std::copy(th.begin(), th.end(), m.parameters().begin());
        return train::evaluate_loss(m, problem, b, w, train_mode, seed, 1).total;
      },
      theta, ev.gradient, 1e-5);
}

double tangent_error(const nn::Surrogate& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6;
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double a = u(rng), t = u(rng);
    const Dual2 d = model.dual(a, t);
    const double fa = (model.value(a + h, t) - model.value(a - h, t)) / (2 * h);
    const double ft = (model.value(a, t + h) - model.value(a, t - h)) / (2 * h);
    worst = std::max({worst, rel(d.da, fa), rel(d.dt, ft)});
  }
  return worst;
}

nn::Surrogate perturbed_lstm(std::uint64_t seed) {
  auto p = nn::lstm_init(1, 8, seed);
  std::mt19937_64 rng(seed + 100);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto& v : p.flat()) v += u(rng);
  return nn::Surrogate(p, 0.1);
}

Outcome gradient_fidelity() {
  const auto problem = demo::Problem::make(demo::PolicyName::three_child);
  double g_mlp = 0, g_lstm = 0, t_mlp = 0, t_lstm = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const nn::Surrogate mlp(nn::mlp_init({2, 8, 1}, seed));
    const auto lstm = perturbed_lstm(seed);
    g_mlp = std::max(g_mlp, loss_gradient_error(mlp, problem, false, seed));
    g_lstm = std::max(g_lstm, loss_gradient_error(lstm, problem, true, seed));
    t_mlp = std::max(t_mlp, tangent_error(mlp, seed + 10));
    t_lstm = std::max(t_lstm, tangent_error(lstm, seed + 10));
  }
  return {g_mlp < 1e-4 && g_lstm < 1e-4 && t_mlp < 1e-6 && t_lstm < 1e-5,
          "grad mlp=" + fmt("%.2e", g_mlp) + " lstm=" + fmt("%.2e", g_lstm) + " tangent mlp=" +
              fmt("%.2e", t_mlp) + " lstm=" + fmt("%.2e", t_lstm)};
}

// ---- 2: upwind vs characteristics without births

Outcome oracle_convergence() {
  auto p = demo::Problem::without_births();
  std::vector<std::pair<double, double>> knots;
  for (int k = 0; k <= 400; ++k) knots.emplace_back(0.25 * k, 0.5 + 0.4 * std::cos(0.25 * k / 30.0));
  p.profile = demo::InitialProfile::from_knots(knots);
  // Stay 25 years of age clear of the front entering from the zero-birth boundary.
  const double margin = 25.0;
  const double speed = p.equation.aging_speed(p.domain);
  std::vector<double> errs;
  for (std::size_t level = 0; level < 3; ++level) {
    const ref::GridSpec g{(100u << level) + 1, (300u << level) + 1};
    const auto f = ref::solve_upwind(p, g);
    double err = 0;
    for (std::size_t n = 0; n < g.nt; ++n) {
      for (std::size_t i = 0; i < g.na; ++i) {
        if (f.age(i) < speed * (f.year(n) - p.domain.t_min) + margin) continue;
        err = std::max(err, std::abs(f.at(i, n) - ref::characteristic_solution(f.age(i), f.year(n), p)));
      }
    }
    errs.push_back(err);
  }
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  const auto ok = [](double r) { return r >= 1.7 && r <= 2.3; };
  return {ok(r1) && ok(r2), "linf " + fmt("%.3e", errs[0]) + " " + fmt("%.3e", errs[1]) + " " +
                                fmt("%.3e", errs[2]) + " ratios " + fmt("%.3f", r1) + " " + fmt("%.3f", r2)};
}

// ---- 3: coefficient functions

Outcome coefficients() {
  const demo::MortalityModel mu;
  const double left = mu(std::nextafter(60.0, 0.0));
  const double jump = std::abs(mu(60.0) - left);
  const double mu70 = std::abs(mu(70.0) - 0.024805083 * std::exp(0.6));
  const bool asfr = demo::base_asfr(27.5) == 0.12375;
  const auto three = demo::PolicyScenario::make(demo::PolicyName::three_child);
  const auto sep = demo::PolicyScenario::make(demo::PolicyName::separate_two_child);
  const auto uni = demo::PolicyScenario::make(demo::PolicyName::universal_two_child);
  const demo::Domain d;
  bool capped = true;
  double ratio_gap = 0;
  for (int i = 0; i <= 100; ++i) {
    const double a = d.a0 * i / 100.0;
    for (int n = 0; n <= 30; ++n) {
      const double t = d.t_min + d.duration() * n / 30.0;
      for (const auto* s : {&three, &sep, &uni}) {
        const double f = demo::fertility(a, t, *s);
        capped = capped && f >= 0.0 && f <= s->cap;
      }
      if (demo::base_asfr(a) > 0) {
        ratio_gap = std::max(ratio_gap, std::abs(demo::fertility(a, t, three) / demo::fertility(a, t, sep) - 4.0 / 3.0));
      }
    }
  }
  return {jump <= 1e-12 && mu70 <= 1e-12 && asfr && capped && ratio_gap <= 1e-12,
          "mu jump=" + fmt("%.1e", jump) + " mu(70) err=" + fmt("%.1e", mu70) +
              " asfr(27.5) exact=" + (asfr ? "yes" : "no") + " caps=" + (capped ? "ok" : "violated") +
              " ratio gap=" + fmt("%.1e", ratio_gap)};
}

// ---- 4: birth quadrature

Outcome quadrature() {
  const auto three = demo::PolicyScenario::make(demo::PolicyName::three_child);
  const double exact = 1.6 * 0.0022 * 562.5;
  const auto unit = [](double) { return 1.0; };
  const double dflt = demo::birth_integral(unit, 2030.0, three, demo::Quadrature{});
  std::vector<double> errs;
  for (std::size_t intervals : {30u, 60u, 120u}) {
    errs.push_back(std::abs(demo::birth_integral(unit, 2030.0, three, demo::Quadrature(intervals + 1)) - exact));
  }
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  const auto ok = [](double r) { return std::abs(r - 4.0) <= 0.2; };
  return {std::abs(dflt - 1.98) <= 1e-3 && ok(r1) && ok(r2),
          "integral=" + fmt("%.6f", dflt) + " ratios " + fmt("%.3f", r1) + " " + fmt("%.3f", r2)};
}

// ---- 5, 6, 8: desk-scale training

struct Run {
  std::vector<train::EpochRecord> history;
  nn::Surrogate model;
  double seconds = 0;
};

cli::RunConfig desk_config(const std::string& model) {
  cli::RunConfig c;
  c.set("scenario", "three-child");
  c.set("model", model);
  c.set("widths", "2,32,32,1");
  c.set("lstm_layers", "2");
  c.set("lstm_hidden", "16");
  c.set("dropout", "0.1");
  c.set("n_interior", "1000");
  c.set("m_initial", "500");
  c.set("k_boundary", "200");
  c.set("quad_nodes", "31");
  c.set("epochs", "2000");
  c.set("lr", "5e-4");
  c.set("seed", "0");
  c.set("threads", "1");
  return c;
}

Run desk_run(const cli::RunConfig& cfg, const fs::path& csv) {
  Run run{{}, cfg.make_model(), 0};
  train::LossLogWriter log(csv);
  const auto start = std::chrono::steady_clock::now();
  auto result = train::train(run.model, cfg.problem(), cfg.train_config(),
                             [&](const train::EpochRecord& r) { log.append(r); });
  log.close();
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.history = std::move(result.history);
  return run;
}

bool finite_components(const std::vector<train::EpochRecord>& h) {
  return std::all_of(h.begin(), h.end(), [](const train::EpochRecord& r) {
    return std::isfinite(r.total) && std::isfinite(r.pde) && std::isfinite(r.ic) && std::isfinite(r.bc);
  });
}

// Largest step up of the 100-epoch trailing mean over the last 500 epochs.
double moving_average_rise(const std::vector<train::EpochRecord>& h) {
  const std::size_t w = 100, tail = 500;
  if (h.size() < tail + w) return INFINITY;
  std::vector<double> ma;
  for (std::size_t end = h.size() - tail; end < h.size(); ++end) {
    double s = 0;
    for (std::size_t k = end + 1 - w; k <= end; ++k) s += h[k].total;
    ma.push_back(s / static_cast<double>(w));
  }
  double rise = 0;
  for (std::size_t k = 1; k < ma.size(); ++k) rise = std::max(rise, ma[k] - ma[k - 1]);
  return rise;
}

double field_error(const nn::Surrogate& model, const demo::Problem& problem) {
  const auto ref_field = ref::solve_upwind(problem, {51, 31});
  std::vector<double> pred(ref_field.values.size());
  for (std::size_t i = 0; i < ref_field.grid.na; ++i) {
    for (std::size_t n = 0; n < ref_field.grid.nt; ++n) {
      pred[i * ref_field.grid.nt + n] = model.value(problem.domain.normalize_age(ref_field.age(i)),
                                                    problem.domain.normalize_time(ref_field.year(n)));
    }
  }
  return ref::relative_l2(pred, ref_field.values);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome pinn_run(const Run& run) {
  const auto cfg = desk_config("pinn");
  const auto& h = run.history;
  if (h.size() != 2000) return {false, "recorded " + std::to_string(h.size()) + " epochs"};
  const double ratio = h.back().total / h.front().total;
  const double rise = moving_average_rise(h);
  const double l2 = field_error(run.model, cfg.problem());
  const bool finite = finite_components(h);
  return {ratio <= 1e-2 && finite && rise <= 0.0 && l2 <= 0.15,
          "ratio=" + fmt("%.4g", ratio) + " finite=" + (finite ? "yes" : "no") + " ma100 max rise=" +
              fmt("%.3g", rise) + " rel_l2=" + fmt("%.4f", l2) + " time=" + fmt("%.1fs", run.seconds)};
}

Outcome lstm_run(const fs::path& dir) {
  const auto cfg = desk_config("lstm-pinn");
  const auto csv = dir / "lstm_loss.csv";
  const Run run = desk_run(cfg, csv);
  const auto& h = run.history;
  const auto logged = train::read_loss_log(csv);
  const bool complete = logged.size() == 2000 && h.size() == 2000;
  const double ratio = h.empty() ? INFINITY : h.back().total / h.front().total;
  const bool finite = finite_components(h);
  return {complete && finite && ratio <= 0.10,
          "ratio=" + fmt("%.4g", ratio) + " finite=" + (finite ? "yes" : "no") + " csv rows=" +
              std::to_string(logged.size()) + " time=" + fmt("%.1fs", run.seconds)};
}

// ---- 7: defaults

Outcome defaults() {
  const cli::RunConfig c;
  const auto tc = c.train_config();
  cli::RunConfig l;
  l.set("model", "lstm-pinn");
  const auto lstm = l.make_model();
  const bool ok = tc.sampler.n_interior == 5000 && tc.sampler.m_initial == 2000 && tc.sampler.k_boundary == 2000 &&
                  tc.epochs == 10000 && tc.adam.lr == 5e-4 &&
                  c.widths == std::vector<std::size_t>{2, 128, 128, 64, 1} && lstm.lstm().layers() == 4 &&
                  lstm.lstm().hidden() == 64 && nn::gate_count(lstm.lstm()) == 768 && lstm.dropout_rate() == 0.1 &&
                  tc.weights.lambda1 == 1.0 && tc.weights.lambda2 == 1.0 && tc.weights.lambda3 == 1.0;
  return {ok, "N/M/K=" + std::to_string(tc.sampler.n_interior) + "/" + std::to_string(tc.sampler.m_initial) + "/" +
                  std::to_string(tc.sampler.k_boundary) + " epochs=" + std::to_string(tc.epochs) +
                  " lr=" + fmt("%g", tc.adam.lr) + " mlp params=" + std::to_string(c.make_model().parameter_count()) +
                  " lstm " + lstm.architecture() + " gates=" + std::to_string(nn::gate_count(lstm.lstm()))};
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "agepinn_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  int failures = 0;
  const auto report = [&](int n, const Outcome& o) {
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, guarded(gradient_fidelity));
  report(2, guarded(oracle_convergence));
  report(3, guarded(coefficients));
  report(4, guarded(quadrature));

  Run first;
  report(5, guarded([&] {
           first = desk_run(desk_config("pinn"), dir / "pinn_a.csv");
           return pinn_run(first);
         }));
  report(6, guarded([&] { return lstm_run(dir); }));
  report(7, guarded(defaults));
  report(8, guarded([&] {
           desk_run(desk_config("pinn"), dir / "pinn_b.csv");
           const auto a = slurp(dir / "pinn_a.csv"), b = slurp(dir / "pinn_b.csv");
           const bool same = !a.empty() && a == b;
           return Outcome{same, std::string("loss csv ") + (same ? "identical" : "differs") + " (" +
                                    std::to_string(a.size()) + " bytes)"};
         }));
  return failures;
}
