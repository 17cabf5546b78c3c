// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "sahar/app/synthetic.hpp"
#include "sahar/errors.hpp"
#include "sahar/evaluation/metrics.hpp"
#include "sahar/evaluation/protocols.hpp"
#include "sahar/model/checkpoint.hpp"
#include "sahar/model/model.hpp"
#include "sahar/training/adam.hpp"
#include "sahar/training/trainer.hpp"

using namespace sahar;
using namespace sahar::training;

namespace {

model::ModelConfig tiny_config(std::size_t t = 8, std::size_t s = 3, std::size_t c = 3) {
  model::ModelConfig cfg;
  cfg.window_length = t;
  cfg.num_channels = s;
  cfg.num_classes = c;
  cfg.d_model = 8;
  cfg.n_heads = 2;
  cfg.n_blocks = 1;
  cfg.ffn_dim = 16;
  cfg.k_filters = 2;
  cfg.dropout = 0.0;
  return cfg;
}

app::SyntheticSpec tiny_spec() {
  app::SyntheticSpec spec;
  spec.num_channels = 3;
  spec.informative_channel = 1;
  return spec;
}

double window_f1(const data::WindowedDataset& ds, const model::ModelParams& p, const model::ModelConfig& cfg) {
  evaluation::ConfusionMatrix cm(cfg.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    cm.add(static_cast<std::size_t>(ds.labels[i]), model::predict(ds.windows[i], p, cfg).label());
  }
  return evaluation::macro_f1(cm);
}

}  // namespace

TEST_CASE("adam examples") {
  Tensor p = Tensor::vector({0.5, -1.0});
  std::vector<Tensor*> params{&p};
  auto state = make_adam_state(std::vector<const Tensor*>{&p});
  adam_step(params, std::vector<Tensor>{Tensor({2})}, state, {});
  CHECK(p == Tensor::vector({0.5, -1.0}));
  CHECK(state.t == 1);

  Tensor scalar = Tensor::vector({0.0});
  std::vector<Tensor*> sp{&scalar};
  auto s2 = make_adam_state(std::vector<const Tensor*>{&scalar});
  AdamConfig cfg;
  adam_step(sp, std::vector<Tensor>{Tensor::vector({1.0})}, s2, cfg);
  // m_hat = 1 and v_hat = 1 after bias correction.
  CHECK(scalar[0] == doctest::Approx(-cfg.learning_rate / (1.0 + cfg.eps)).epsilon(1e-12));
  CHECK(std::abs(scalar[0] + cfg.learning_rate) < 1e-10);

  CHECK_THROWS_AS(adam_step(sp, std::vector<Tensor>{Tensor({2})}, s2, cfg), DimensionError);
}

TEST_CASE("adam trajectories are deterministic") {
  auto run = [] {
    Rng rng(4);
    Tensor p({3});
    for (auto& v : p.data()) v = rng.normal();
    std::vector<Tensor*> params{&p};
    auto st = make_adam_state(std::vector<const Tensor*>{&p});
    for (int i = 0; i < 50; ++i) {
      Tensor g = p;
      g *= 2.0;  // gradient of |p|^2
      adam_step(params, std::vector<Tensor>{g}, st, {});
    }
    return p;
  };
  CHECK(run() == run());
}

TEST_CASE("inverse frequency weights") {
  std::vector<int> labels{0, 0, 0, 1};
  auto w = inverse_frequency_weights(labels, 3);
  CHECK(w[0] == doctest::Approx(4.0 / 9.0));
  CHECK(w[1] == doctest::Approx(4.0 / 3.0));
  CHECK(w[2] == 1.0);
  CHECK_THROWS_AS(inverse_frequency_weights(std::vector<int>{5}, 3), DataError);
}

TEST_CASE("batch gradients do not depend on the thread count") {
  auto cfg = tiny_config();
  cfg.dropout = 0.3;
  Rng rng(1);
  auto ds = app::planted_windows(tiny_spec(), 20, 8, rng);
  auto params = model::init_params(cfg, rng);
  std::vector<std::size_t> batch(20);
  std::iota(batch.begin(), batch.end(), 0);
  TrainRunConfig run;
  run.threads = 1;
  auto a = batch_gradients(cfg, params, ds, batch, {}, run, 1);
  run.threads = 4;
  auto b = batch_gradients(cfg, params, ds, batch, {}, run, 1);
  CHECK(a.loss_sum == b.loss_sum);
  REQUIRE(a.grads.size() == b.grads.size());
  for (std::size_t i = 0; i < a.grads.size(); ++i) CHECK(a.grads[i] == b.grads[i]);
}

TEST_CASE("every parameter receives gradient after one batch") {
  auto cfg = tiny_config();
  cfg.fc_hidden = {4};
  Rng rng(2);
  auto ds = app::planted_windows(tiny_spec(), 12, 8, rng);
  auto params = model::init_params(cfg, rng);
  std::vector<std::size_t> batch(12);
  std::iota(batch.begin(), batch.end(), 0);
  auto bg = batch_gradients(cfg, params, ds, batch, {}, TrainRunConfig{}, 1);
  std::size_t i = 0;
  params.for_each([&](const std::string& name, const Tensor&) {
    INFO(name);
    CHECK(squared_norm(bg.grads[i++]) > 0.0);
  });
}

TEST_CASE("training fits a separable planted dataset") {
  auto cfg = tiny_config();
  Rng rng(3);
  auto ds = app::planted_windows(tiny_spec(), 64, 8, rng);
  TrainRunConfig run;
  run.batch_size = 16;
  run.max_epochs = 200;
  run.seed = 3;
  Rng init(3);
  std::size_t seen = 0;
  auto result = train(cfg, model::init_params(cfg, init), ds, {}, run, [&](const EpochRecord&) { ++seen; });
  CHECK(seen == result.history.size());
  CHECK(result.history.size() <= run.max_epochs);
  CHECK(result.history[9].train_loss < result.history[0].train_loss);
  CHECK(window_f1(ds, result.best_params, cfg) >= 0.99);
  CHECK(std::isnan(result.history[0].val_f1_sample));
}

TEST_CASE("early stopping and best-parameter retention") {
  auto cfg = tiny_config();
  Rng rng(5);
  auto spec = tiny_spec();
  auto ds = app::planted_windows(spec, 16, 8, rng);
  std::vector<data::RawRecording> val{app::planted_recording(spec, 6, 10, "v", rng)};
  TrainRunConfig run;
  run.batch_size = 8;
  run.max_epochs = 20;
  run.adam.learning_rate = 1e-14;  // parameters effectively frozen: F1 never improves after epoch 1
  for (std::size_t patience : {0u, 2u}) {
    run.patience = patience;
    Rng init(5);
    auto result = train(cfg, model::init_params(cfg, init), ds, val, run);
    CHECK(result.stopped_early);
    CHECK(result.best_epoch == 1);
    CHECK(result.history.size() == patience + 2);
  }
  CHECK_THROWS_AS(train(cfg, model::init_params(cfg, rng), data::WindowedDataset{}, val, run), ProtocolError);
}

TEST_CASE("training is reproducible and checkpoints reproduce validation F1") {
  auto cfg = tiny_config();
  cfg.dropout = 0.2;
  Rng rng(6);
  auto spec = tiny_spec();
  auto ds = app::planted_windows(spec, 24, 8, rng);
  std::vector<data::RawRecording> val{app::planted_recording(spec, 6, 12, "v", rng)};
  TrainRunConfig run;
  run.batch_size = 8;
  run.max_epochs = 4;
  run.seed = 11;
  auto once = [&] {
    Rng init(11);
    return train(cfg, model::init_params(cfg, init), ds, val, run);
  };
  auto a = once(), b = once();
  CHECK(history_csv(a.history, false) == history_csv(b.history, false));
  std::size_t i = 0;
  std::vector<Tensor> pa;
  a.best_params.for_each([&](const std::string&, const Tensor& t) { pa.push_back(t); });
  b.best_params.for_each([&](const std::string&, const Tensor& t) { CHECK(t == pa[i++]); });

  const auto dir = std::filesystem::temp_directory_path() / "sahar_train_ckpt";
  std::filesystem::remove_all(dir);
  model::save_checkpoint(dir, {cfg, a.best_params, {}});
  auto back = model::load_checkpoint(dir);
  auto predictor = [&](const Tensor& w) { return model::predict(w, back.params, back.config).label(); };
  const double f1 = evaluation::score_window_wise(predictor, val, cfg.window_length, cfg.num_classes).macro_f1;
  CHECK(std::abs(f1 - a.best_val_f1) <= 1e-9);
  std::filesystem::remove_all(dir);
}

TEST_CASE("history csv") {
  std::vector<EpochRecord> h{{1, 0.5, 0.25, std::nan(""), 1.5}};
  CHECK(history_csv(h, false) == "epoch,train_loss,val_f1_sample,val_f1_window\n1,0.5,0.25,nan\n");
  CHECK(history_csv(h, true) == "epoch,train_loss,val_f1_sample,val_f1_window,wall_time\n1,0.5,0.25,nan,1.5\n");
  CHECK(parse_train_mode("sample_wise") == TrainMode::SampleWise);
  CHECK_THROWS_AS(parse_train_mode("both"), ConfigError);
}
