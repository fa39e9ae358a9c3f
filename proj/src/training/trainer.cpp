#include "agepinn/training/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "agepinn/error.hpp"
#include "agepinn/random.hpp"

namespace agepinn::train {
namespace {

// Fixed work decomposition; never derived from the thread count.
constexpr std::size_t kPartitions = 16;

struct WorkItem {
  PointKind kind;
  std::size_t begin;
  std::size_t end;
};

struct Partial {
  double loss = 0.0;
  std::vector<double> grad;
};

std::vector<WorkItem> partition(const Batches& b) {
  std::vector<WorkItem> items;
  const auto add = [&](PointKind kind, std::size_t n) {
    for (std::size_t p = 0; p < kPartitions; ++p) {
      const std::size_t lo = n * p / kPartitions;
      const std::size_t hi = n * (p + 1) / kPartitions;
      if (hi > lo) items.push_back({kind, lo, hi});
    }
  };
  add(PointKind::interior, b.interior.size());
  add(PointKind::initial, b.initial.size());
  add(PointKind::boundary, b.boundary.size());
  return items;
}

class LossWorker {
 public:
  LossWorker(const nn::Surrogate& model, const demo::Problem& problem, const Batches& batches,
             const LossWeights& w, bool train_mode, std::uint64_t seed, std::uint64_t epoch)
      : model_(model), problem_(problem), batches_(batches), w_(w), train_(train_mode),
        seed_(seed), epoch_(epoch), eval_(model) {}

  void run(const WorkItem& item, Partial& out) {
    out.grad.assign(model_.parameter_count(), 0.0);
    out.loss = 0.0;
    switch (item.kind) {
      case PointKind::interior:
        return interior(item, out);
      case PointKind::initial:
        return initial(item, out);
      case PointKind::boundary:
        return boundary(item, out);
    }
  }

 private:
  std::uint64_t pass_seed(PointKind kind, std::size_t index, std::size_t node = 0) const {
    return hash_keys({seed_, epoch_, static_cast<std::uint64_t>(kind), index, node});
  }

  void interior(const WorkItem& item, Partial& out) {
    const auto& pts = batches_.interior;
    const double scale = 2.0 * w_.lambda1 / static_cast<double>(pts.size());
    const auto& eq = problem_.equation;
    for (std::size_t k = item.begin; k < item.end; ++k) {
      const Point p = pts[k];
      const Dual2 out_p = eval_.forward_dual(p.a, p.t, train_, pass_seed(PointKind::interior, k));
      const double mu = problem_.mortality(problem_.domain.age_of(p.a));
      const double r = out_p.dt + eq.age * out_p.da + eq.mortality * mu * out_p.value;
      out.loss += r * r;
      const double c = scale * r;
      if (c != 0.0) eval_.backward_dual(nn::Projection{c * eq.mortality * mu, c * eq.age, c}, out.grad);
    }
  }

  void initial(const WorkItem& item, Partial& out) {
    const auto& pts = batches_.initial;
    const double scale = 2.0 * w_.lambda2 / static_cast<double>(pts.size());
    for (std::size_t k = item.begin; k < item.end; ++k) {
      const Point p = pts[k];
      const double pred = eval_.forward_value(p.a, 0.0, train_, pass_seed(PointKind::initial, k));
      const double ref = problem_.profile(problem_.domain.age_of(p.a));
      const double denom = ref + w_.epsilon0;
      const double e = (pred - ref) / denom;
      out.loss += e * e;
      eval_.backward_value(scale * e / denom, out.grad);
    }
  }

  void boundary(const WorkItem& item, Partial& out) {
    const auto& pts = batches_.boundary;
    const auto& dom = problem_.domain;
    const auto& q = problem_.quadrature;
    const double scale = 2.0 * w_.lambda3 / static_cast<double>(pts.size());
    std::vector<double> bw;
    for (std::size_t k = item.begin; k < item.end; ++k) {
      const Point p = pts[k];
      const double head = eval_.forward_value(0.0, p.t, train_, pass_seed(PointKind::boundary, k), 0);
      double births = 0.0;
      bw.clear();
      if (problem_.policy) bw = demo::birth_weights(dom.year_of(p.t), *problem_.policy, q);
      std::size_t slot = 1;
      for (std::size_t j = 0; j < bw.size(); ++j) {
        if (bw[j] == 0.0) continue;
        births += bw[j] * eval_.forward_value(dom.normalize_age(q.nodes()[j]), p.t, train_,
                                              pass_seed(PointKind::boundary, k, j + 1), slot++);
      }
      const double d = head - births;
      out.loss += d * d;
      const double c = scale * d;
      eval_.backward_value(c, out.grad, 0);
      slot = 1;
      for (std::size_t j = 0; j < bw.size(); ++j) {
        if (bw[j] == 0.0) continue;
        eval_.backward_value(-c * bw[j], out.grad, slot++);
      }
    }
  }

  const nn::Surrogate& model_;
  const demo::Problem& problem_;
  const Batches& batches_;
  const LossWeights& w_;
  bool train_;
  std::uint64_t seed_;
  std::uint64_t epoch_;
  nn::Evaluator eval_;
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void TrainConfig::validate() const {
  sampler.validate();
  adam.validate();
  weights.validate();
  if (threads == 0) throw UsageError("threads must be at least 1");
  if (std::isnan(threshold)) throw UsageError("threshold must not be NaN");
}

LossEvaluation evaluate_loss(const nn::Surrogate& model, const demo::Problem& problem,
                             const Batches& batches, const LossWeights& weights, bool train_mode,
                             std::uint64_t seed, std::uint64_t epoch, std::size_t threads) {
  if (batches.interior.empty() || batches.initial.empty() || batches.boundary.empty()) {
    throw UsageError("evaluate_loss: empty batch");
  }
  const auto items = partition(batches);
  std::vector<Partial> partials(items.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, items.size()));
  if (workers == 1) {
    LossWorker w(model, problem, batches, weights, train_mode, seed, epoch);
    for (std::size_t i = 0; i < items.size(); ++i) w.run(items[i], partials[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          LossWorker w(model, problem, batches, weights, train_mode, seed, epoch);
          for (std::size_t i = next++; i < items.size(); i = next++) w.run(items[i], partials[i]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  LossEvaluation out;
  out.gradient.assign(model.parameter_count(), 0.0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    switch (items[i].kind) {
      case PointKind::interior:
        out.components.pde += partials[i].loss;
        break;
      case PointKind::initial:
        out.components.ic += partials[i].loss;
        break;
      case PointKind::boundary:
        out.components.bc += partials[i].loss;
        break;
    }
    const auto& g = partials[i].grad;
    for (std::size_t k = 0; k < g.size(); ++k) out.gradient[k] += g[k];
  }
  out.components.pde /= static_cast<double>(batches.interior.size());
  out.components.ic /= static_cast<double>(batches.initial.size());
  out.components.bc /= static_cast<double>(batches.boundary.size());
  out.total = total_loss(out.components, weights);
  return out;
}

TrainResult train(nn::Surrogate& model, const demo::Problem& problem, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  problem.validate();
  const bool train_mode = model.kind() == nn::ModelKind::lstm && model.dropout_rate() > 0.0;
  AdamState adam(model.parameter_count(), config.adam);
  TrainResult result;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const Batches batches = Batches::sample(config.sampler, epoch);
    LossEvaluation ev = evaluate_loss(model, problem, batches, config.weights, train_mode,
                                      config.sampler.seed, epoch, config.threads);
    const EpochRecord rec{epoch, ev.total, ev.components.pde, ev.components.ic, ev.components.bc};
    const bool finite = std::isfinite(ev.total) && std::all_of(ev.gradient.begin(), ev.gradient.end(),
                                                               [](double g) { return std::isfinite(g); });
    if (!finite) {
      std::ostringstream os;
      os << "training diverged at epoch " << epoch << ": total=" << rec.total << " pde=" << rec.pde
         << " ic=" << rec.ic << " bc=" << rec.bc << " |theta|=" << norm2(model.parameters())
         << " |grad|=" << norm2(ev.gradient) << " adam_step=" << adam.step;
      throw NumericError(os.str());
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (std::isfinite(config.threshold) && ev.total < config.threshold) {
      result.stopped_early = true;
      break;
    }
    adam_step(adam, model.parameters(), ev.gradient);
  }
  return result;
}

}  // namespace agepinn::train
