#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "agepinn/error.hpp"
#include "agepinn/networks/dropout.hpp"
#include "agepinn/networks/lstm.hpp"
#include "agepinn/networks/mlp.hpp"
#include "agepinn/networks/surrogate.hpp"
#include "agepinn/simd/kernels.hpp"

using namespace agepinn;
using namespace agepinn::nn;

namespace {

double rel(double analytic, double reference) {
  return std::abs(analytic - reference) / std::max(std::abs(analytic), 1e-12);
}

std::vector<std::pair<double, double>> random_points(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < n; ++k) pts.emplace_back(u(rng), u(rng));
  return pts;
}

void randomize(std::span<double> p, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& v : p) v = u(rng);
}

// Tangents of `model` against central differences of its value.
template <class F>
double tangent_error(const Surrogate& model, double a, double t, F&& value) {
  const double h = 1e-6;
  const Dual2 d = model.dual(a, t);
  const double fa = (value(a + h, t) - value(a - h, t)) / (2 * h);
  const double ft = (value(a, t + h) - value(a, t - h)) / (2 * h);
  CHECK(d.value == doctest::Approx(value(a, t)).epsilon(1e-14));
  return std::max(rel(d.da, fa), rel(d.dt, ft));
}

// Max relative gap between fused and taped parameter triples.
double adjoint_gap(const Surrogate& model, double a, double t) {
  Evaluator ev(model);
  const Adjoints fused = ev.parameter_adjoints(a, t);
  Tape tape;
  const auto root = record_forward(model, tape, a, t);
  const Adjoints taped = tape.backward(root, model.parameter_count());
  REQUIRE(fused.size() == taped.size());
  double worst = 0;
  for (std::size_t k = 0; k < fused.size(); ++k) {
    const auto gap = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-8); };
    worst = std::max({worst, gap(fused[k].value, taped[k].value), gap(fused[k].da, taped[k].da),
                      gap(fused[k].dt, taped[k].dt)});
  }
  return worst;
}

}  // namespace

TEST_CASE("feed-forward parameter counts") {
  const std::size_t expected = (2 * 128 + 128) + (128 * 128 + 128) + (128 * 64 + 64) + (64 * 1 + 1);
  CHECK(expected == 25217);
  CHECK(mlp_parameter_count(kDefaultMlpWidths) == expected);
  CHECK(mlp_init({2, 128, 128, 64, 1}, 42).size() == expected);
  CHECK(mlp_init({2, 1}, 5).size() == 3);
  CHECK(kDefaultMlpWidths == std::vector<std::size_t>{2, 128, 128, 64, 1});
}

TEST_CASE("feed-forward width validation") {
  CHECK_THROWS_AS(MlpParams({3, 1}), UsageError);
  CHECK_THROWS_AS(MlpParams({2, 4, 2}), UsageError);
  CHECK_THROWS_AS(MlpParams({2, 0, 1}), UsageError);
  CHECK_THROWS_AS(MlpParams({2}), UsageError);
}

TEST_CASE("feed-forward init is seeded Glorot uniform with zero biases") {
  const auto p = mlp_init({2, 16, 8, 1}, 42);
  const auto q = mlp_init({2, 16, 8, 1}, 42);
  CHECK(std::memcmp(p.flat().data(), q.flat().data(), p.size() * sizeof(double)) == 0);
  CHECK(mlp_init({2, 16, 8, 1}, 43).flat()[0] != p.flat()[0]);
  const std::vector<std::size_t> w{2, 16, 8, 1};
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w[l] + w[l + 1]));
    for (std::size_t o = 0; o < w[l + 1]; ++o) {
      CHECK(p.bias(l, o) == 0.0);
      for (std::size_t i = 0; i < w[l]; ++i) CHECK(std::abs(p.weight(l, o, i)) <= bound);
    }
  }
}

TEST_CASE("flatten and unflatten") {
  auto p = mlp_init({2, 5, 3, 1}, 1);
  const auto flat = p.flatten();
  MlpParams q({2, 5, 3, 1});
  q.unflatten(flat);
  CHECK(std::memcmp(q.flat().data(), flat.data(), flat.size() * sizeof(double)) == 0);
  CHECK(mlp_forward(q, 0.3, 0.6) == mlp_forward(p, 0.3, 0.6));
  CHECK_THROWS_AS(q.unflatten(std::vector<double>(flat.size() + 1)), UsageError);

  auto l = lstm_init(2, 3, 4);
  LstmParams l2(2, 3);
  l2.unflatten(l.flatten());
  CHECK(lstm_forward(l2, 0.2, 0.1, {}) == lstm_forward(l, 0.2, 0.1, {}));
  CHECK_THROWS_AS(l2.unflatten(std::vector<double>(3)), UsageError);
}

TEST_CASE("perturbing one flat index changes exactly one coefficient") {
  const std::vector<std::size_t> w{2, 3, 2, 1};
  const auto base = mlp_init(w, 8);
  const auto coefficients = [&](const MlpParams& p) {
    std::vector<double> out;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      for (std::size_t o = 0; o < w[l + 1]; ++o) {
        for (std::size_t i = 0; i < w[l]; ++i) out.push_back(p.weight(l, o, i));
        out.push_back(p.bias(l, o));
      }
    }
    return out;
  };
  const auto ref = coefficients(base);
  for (std::size_t k = 0; k < base.size(); ++k) {
    auto p = base;
    p.flat()[k] += 1.0;
    const auto c = coefficients(p);
    int changed = 0;
    for (std::size_t j = 0; j < c.size(); ++j) changed += c[j] != ref[j];
    CHECK(changed == 1);
  }
}

TEST_CASE("constant and single-unit feed-forward networks") {
  MlpParams p({2, 4, 1});
  p.bias(1, 0) = 0.75;
  const Dual2 d = mlp_forward(p, Dual2{0.3, 1, 0}, Dual2{0.8, 0, 1});
  CHECK(d.value == 0.75);
  CHECK(d.da == 0.0);
  CHECK(d.dt == 0.0);

  MlpParams one({2, 1, 1});
  one.weight(0, 0, 0) = 1.0;
  one.weight(1, 0, 0) = 1.0;
  const Dual2 y = mlp_forward(one, Dual2{0, 1, 0}, Dual2{0.5, 0, 1});
  CHECK(y.value == 0.0);
  CHECK(y.da == 1.0);
  CHECK(y.dt == 0.0);
}

TEST_CASE("feed-forward tangents match central differences") {
  const Surrogate model(mlp_init({2, 32, 32, 1}, 3));
  for (auto [a, t] : random_points(17, 20)) {
    CHECK(tangent_error(model, a, t, [&](double x, double y) { return model.value(x, y); }) < 1e-6);
  }
}

TEST_CASE("fused feed-forward matches the node-by-node evaluator") {
  const auto p = mlp_init({2, 9, 7, 1}, 12);
  const auto param = [&](std::size_t k) { return p.flat()[k]; };
  for (auto [a, t] : random_points(4, 10)) {
    const double g = mlp_forward_generic<double>(p.widths(), param, a, t);
    CHECK(mlp_forward(p, a, t) == doctest::Approx(g).epsilon(1e-13));
  }
}

TEST_CASE("fused parameter adjoints match the tape") {
  SUBCASE("feed-forward") {
    const Surrogate model(mlp_init({2, 8, 6, 1}, 6));
    for (auto [a, t] : random_points(2, 5)) CHECK(adjoint_gap(model, a, t) < 1e-10);
  }
  SUBCASE("lstm") {
    auto p = lstm_init(2, 5, 9);
    randomize(p.flat(), 10, 0.8);
    const Surrogate model(p, 0.1);
    for (auto [a, t] : random_points(3, 5)) CHECK(adjoint_gap(model, a, t) < 1e-10);
  }
}

TEST_CASE("real-valued backward matches the value part of the adjoints") {
  auto p = lstm_init(2, 4, 1);
  randomize(p.flat(), 2, 0.6);
  for (const Surrogate& model : {Surrogate(mlp_init({2, 5, 1}, 3)), Surrogate(p, 0.0)}) {
    Evaluator ev(model);
    const Adjoints adj = ev.parameter_adjoints(0.4, 0.7);
    std::vector<double> g(model.parameter_count(), 0.0);
    ev.forward_value(0.4, 0.7);
    ev.backward_value(2.0, g);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == doctest::Approx(2.0 * adj[k].value).epsilon(1e-12));
  }
}

TEST_CASE("evaluator slots keep independent traces") {
  const Surrogate model(mlp_init({2, 6, 1}, 4));
  Evaluator ev(model);
  std::vector<double> g1(model.parameter_count(), 0.0), g2(model.parameter_count(), 0.0);
  ev.forward_value(0.1, 0.2, false, 0, 0);
  ev.backward_value(1.0, g1, 0);
  ev.forward_value(0.9, 0.4, false, 0, 0);
  ev.backward_value(-0.5, g1, 0);

  ev.forward_value(0.1, 0.2, false, 0, 0);
  ev.forward_value(0.9, 0.4, false, 0, 3);
  ev.backward_value(-0.5, g2, 3);
  ev.backward_value(1.0, g2, 0);
  for (std::size_t k = 0; k < g1.size(); ++k) CHECK(g1[k] == doctest::Approx(g2[k]).epsilon(1e-15));
}

TEST_CASE("lstm shapes, counts and gates") {
  const std::size_t H = 64;
  const std::size_t expected = (4 * H * 2 + 4 * H * H + 4 * H) + 3 * (4 * H * H + 4 * H * H + 4 * H) + H + 1;
  const auto p = lstm_init(4, 64, 0);
  CHECK(lstm_parameter_count(4, 64) == expected);
  CHECK(p.size() == expected);
  CHECK(gate_count(p) == 768);
  CHECK(gate_count(LstmParams(2, 16)) == 96);
  CHECK(gate_count(LstmParams(1, 1)) == 3);
  CHECK(p.input_width(0) == 2);
  for (std::size_t l = 1; l < 4; ++l) CHECK(p.input_width(l) == 64);
  CHECK_THROWS_AS(LstmParams(0, 4), UsageError);
  CHECK_THROWS_AS(LstmParams(2, 0), UsageError);
}

TEST_CASE("lstm init bounds and forget bias") {
  const auto p = lstm_init(2, 8, 5);
  const double bound = 1.0 / std::sqrt(8.0);
  for (std::size_t l = 0; l < 2; ++l) {
    const std::size_t bo = p.bias_offset(l);
    for (std::size_t k = p.input_weights_offset(l); k < bo; ++k) CHECK(std::abs(p.flat()[k]) <= bound);
    for (std::size_t r = 0; r < 32; ++r) CHECK(p.flat()[bo + r] == (r >= 8 && r < 16 ? 1.0 : 0.0));
  }
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(p.flat()[p.head_weights_offset() + k]) <= bound);
  CHECK(p.flat()[p.head_bias_offset()] == 0.0);
}

TEST_CASE("all-zero lstm outputs its head bias") {
  LstmParams p(3, 4);
  p.flat()[p.head_bias_offset()] = -0.4;
  const Dual2 d = lstm_forward(p, Dual2{0.5, 1, 0}, Dual2{0.5, 0, 1}, {});
  CHECK(d.value == -0.4);
  CHECK(d.da == 0.0);
  CHECK(d.dt == 0.0);
}

TEST_CASE("lstm tangents match central differences") {
  auto p = lstm_init(2, 8, 7);
  randomize(p.flat(), 8, 0.7);
  const Surrogate model(p, 0.1);
  for (auto [a, t] : random_points(23, 20)) {
    CHECK(tangent_error(model, a, t, [&](double x, double y) { return model.value(x, y); }) < 1e-5);
  }
}

TEST_CASE("fused lstm matches the node-by-node evaluator") {
  auto p = lstm_init(3, 4, 2);
  randomize(p.flat(), 3, 0.9);
  const auto param = [&](std::size_t k) { return p.flat()[k]; };
  const auto konst = [](double x) { return x; };
  const std::vector<double> mask(2 * 4, 1.0);
  for (auto [a, t] : random_points(5, 8)) {
    const double g = lstm_forward_generic<double>(p, param, konst, a, t, mask);
    CHECK(lstm_forward(p, a, t, {}) == doctest::Approx(g).epsilon(1e-13));
  }
}

TEST_CASE("dropout modes") {
  auto p = lstm_init(3, 8, 1);
  randomize(p.flat(), 1, 0.5);
  const DropoutSpec eval{0.1, DropoutMode::eval, 3};
  const DropoutSpec train0{0.0, DropoutMode::train, 3};
  CHECK(lstm_forward(p, 0.3, 0.2, eval) == lstm_forward(p, 0.3, 0.2, train0));
  CHECK(lstm_forward(p, 0.3, 0.2, eval) == lstm_forward(p, 0.3, 0.2, DropoutSpec{0.1, DropoutMode::eval, 99}));

  const DropoutSpec train{0.5, DropoutMode::train, 3};
  CHECK(lstm_forward(p, 0.3, 0.2, train) == lstm_forward(p, 0.3, 0.2, train));
  int differ = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    differ += lstm_forward(p, 0.3, 0.2, {0.5, DropoutMode::train, s}) != lstm_forward(p, 0.3, 0.2, eval);
  }
  CHECK(differ > 0);
}

TEST_CASE("dropout masks are inverted and validated") {
  const auto m = draw_masks({0.25, DropoutMode::train, 4}, 3, 1000);
  REQUIRE(m.size() == 3000);
  double mean = 0;
  for (double v : m) {
    CHECK((v == 0.0 || v == 1.0 / 0.75));
    mean += v;
  }
  CHECK(mean / 3000 == doctest::Approx(1.0).epsilon(0.05));
  for (double v : draw_masks({0.25, DropoutMode::eval, 4}, 2, 5)) CHECK(v == 1.0);
  for (double v : draw_masks({0.0, DropoutMode::train, 4}, 2, 5)) CHECK(v == 1.0);
  CHECK_THROWS_AS(validate(DropoutSpec{1.0}), UsageError);
  CHECK_THROWS_AS(validate(DropoutSpec{-0.1}), UsageError);
}

TEST_CASE("one mask per pass is shared by value and tangents") {
  auto p = lstm_init(3, 6, 2);
  randomize(p.flat(), 5, 0.6);
  const Surrogate model(p, 0.3);
  Evaluator ev(model);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double v = ev.forward_value(0.4, 0.6, true, seed);
    const Dual2 d = ev.forward_dual(0.4, 0.6, true, seed);
    CHECK(d.value == doctest::Approx(v).epsilon(1e-14));
  }
  // As the rate shrinks the train-mode output approaches eval mode.
  double last = 1e9;
  for (double rate : {0.3, 0.03, 0.0}) {
    const Surrogate m(p, rate);
    Evaluator e(m);
    double worst = 0;
    for (std::uint64_t s = 0; s < 20; ++s) worst = std::max(worst, std::abs(e.forward_value(0.4, 0.6, true, s) - m.value(0.4, 0.6)));
    CHECK(worst <= last);
    last = worst;
  }
  CHECK(last == 0.0);
}

TEST_CASE("surrogate naming") {
  CHECK(parse_model_kind("pinn") == ModelKind::mlp);
  CHECK(parse_model_kind("lstm-pinn") == ModelKind::lstm);
  CHECK(model_kind_name(ModelKind::lstm) == std::string_view("lstm-pinn"));
  CHECK_THROWS_AS(parse_model_kind("cnn"), UsageError);
  CHECK(Surrogate(mlp_init({2, 32, 32, 1}, 0)).architecture() == "mlp 2,32,32,1");
  CHECK(Surrogate(lstm_init(2, 16, 0), 0.1).architecture() == "lstm 2x16 dropout=0.1");
}

TEST_CASE("kernel sets agree on whole-network evaluation") {
  if (!simd::isa_supported(simd::Isa::avx2)) return;
  const auto before = simd::active_isa();
  auto lp = lstm_init(2, 16, 1);
  const Surrogate models[] = {Surrogate(mlp_init({2, 128, 128, 64, 1}, 1)), Surrogate(lp, 0.0)};
  for (const auto& model : models) {
    simd::set_active_isa(simd::Isa::scalar);
    Evaluator es(model);
    const Adjoints as = es.parameter_adjoints(0.37, 0.52);
    const Dual2 ds = model.dual(0.37, 0.52);
    simd::set_active_isa(simd::Isa::avx2);
    Evaluator ev(model);
    const Adjoints av = ev.parameter_adjoints(0.37, 0.52);
    const Dual2 dv = model.dual(0.37, 0.52);
    CHECK(dv.value == doctest::Approx(ds.value).epsilon(1e-12));
    CHECK(dv.da == doctest::Approx(ds.da).epsilon(1e-12));
    for (std::size_t k = 0; k < as.size(); ++k) {
      CHECK(std::abs(av[k].value - as[k].value) <= 1e-12 * (1 + std::abs(as[k].value)));
      CHECK(std::abs(av[k].da - as[k].da) <= 1e-12 * (1 + std::abs(as[k].da)));
    }
  }
  simd::set_active_isa(before);
}
