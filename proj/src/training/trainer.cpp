// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "sahar/errors.hpp"
#include "sahar/evaluation/protocols.hpp"
#include "sahar/io.hpp"
#include "sahar/model/model.hpp"
#include "sahar/parallel.hpp"

namespace sahar::training {

namespace {

constexpr std::size_t kGradChunks = 8;
constexpr std::uint64_t kShuffleStream = 0x5348;
constexpr std::uint64_t kDropoutStream = 0x4452;

std::vector<Tensor*> param_list(model::ModelParams& p) {
  std::vector<Tensor*> out;
  p.for_each([&](const std::string&, Tensor& t) { out.push_back(&t); });
  return out;
}

std::vector<const Tensor*> param_list(const model::ModelParams& p) {
  std::vector<const Tensor*> out;
  p.for_each([&](const std::string&, const Tensor& t) { out.push_back(&t); });
  return out;
}

void clip_global_norm(std::vector<Tensor>& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) sq += squared_norm(g);
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    for (auto& g : grads) g *= max_norm / norm;
  }
}

}  // namespace

std::string to_string(TrainMode mode) { return mode == TrainMode::SampleWise ? "sample_wise" : "window_wise"; }

TrainMode parse_train_mode(const std::string& s) {
  if (s == "sample_wise" || s == "sample") return TrainMode::SampleWise;
  if (s == "window_wise" || s == "window") return TrainMode::WindowWise;
  throw ConfigError("unknown training mode '" + s + "' (expected sample_wise or window_wise)");
}

void TrainRunConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("train.max_epochs must be >= 1");
  if (!(adam.learning_rate > 0.0)) throw ConfigError("train.learning_rate must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("train.beta1 and train.beta2 must lie in [0, 1)");
  }
  if (!(adam.eps > 0.0)) throw ConfigError("train.eps must be positive");
  if (!(clip_norm >= 0.0)) throw ConfigError("train.clip_norm must be >= 0");
}

std::vector<double> inverse_frequency_weights(std::span<const int> labels, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes) throw DataError("label outside the class range");
    ++counts[static_cast<std::size_t>(l)];
  }
  std::vector<double> w(num_classes, 1.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] > 0) {
      w[c] = static_cast<double>(labels.size()) / (static_cast<double>(num_classes) * static_cast<double>(counts[c]));
    }
  }
  return w;
}

BatchGradients batch_gradients(const model::ModelConfig& cfg, const model::ModelParams& params,
                               const data::WindowedDataset& ds, std::span<const std::size_t> batch,
                               std::span<const double> class_weights, const TrainRunConfig& run, std::size_t epoch) {
  const auto tensors = param_list(params);
  const std::size_t chunks = std::min(kGradChunks, batch.size());
  std::vector<std::vector<Tensor>> partial(chunks);
  std::vector<double> partial_loss(chunks, 0.0);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  parallel_for(chunks, resolve_threads(run.threads), [&](std::size_t c) {
    auto& acc = partial[c];
    for (const Tensor* t : tensors) acc.push_back(Tensor::zeros_like(*t));
    const std::size_t lo = batch.size() * c / chunks, hi = batch.size() * (c + 1) / chunks;
    for (std::size_t b = lo; b < hi; ++b) {
      const std::size_t idx = batch[b];
      const int label = ds.labels[idx];
      if (label < 0 || static_cast<std::size_t>(label) >= cfg.num_classes) {
        throw DataError("training label " + std::to_string(label) + " outside the class range");
      }
      const double w = class_weights.empty() ? 1.0 : class_weights[static_cast<std::size_t>(label)];
      ad::Graph g(true);
      Rng dropout_rng(derive_seed(run.seed, {kDropoutStream, epoch, idx}));
      model::ForwardOptions opts;
      opts.training = true;
      auto vars = model::forward(g, ds.windows[idx], params, cfg, dropout_rng, opts);
      ad::Var loss = ad::cross_entropy(g, vars.logits, static_cast<std::size_t>(label), w);
      partial_loss[c] += g.value(loss)[0];
      g.backward(ad::scale(g, loss, inv_batch));
      for (std::size_t i = 0; i < tensors.size(); ++i) acc[i] += g.param_grad(*tensors[i]);
    }
  });

  BatchGradients out;
  out.grads = std::move(partial[0]);
  out.loss_sum = partial_loss[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    for (std::size_t i = 0; i < tensors.size(); ++i) out.grads[i] += partial[c][i];
    out.loss_sum += partial_loss[c];
  }
  return out;
}

TrainResult train(const model::ModelConfig& cfg, model::ModelParams initial, const data::WindowedDataset& train_set,
                  const std::vector<data::RawRecording>& validation, const TrainRunConfig& run,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  cfg.validate();
  run.validate();
  if (train_set.empty()) throw ProtocolError("training set is empty");
  if (train_set.window_length != cfg.window_length || train_set.num_channels != cfg.num_channels) {
    throw DimensionError("training windows are " + shape_string({train_set.window_length, train_set.num_channels}) +
                         ", model expects " + shape_string({cfg.window_length, cfg.num_channels}));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t threads = resolve_threads(run.threads);
  const std::vector<double> weights =
      run.class_weighting ? inverse_frequency_weights(train_set.labels, cfg.num_classes) : std::vector<double>{};

  TrainResult result;
  model::ModelParams params = std::move(initial);
  const auto tensors = param_list(params);
  AdamState adam = make_adam_state(std::vector<const Tensor*>(tensors.begin(), tensors.end()));
  std::vector<std::size_t> order(train_set.size());
  std::size_t stale = 0;
  bool have_best = false;
  result.best_val_f1 = nan;

  for (std::size_t epoch = 1; epoch <= run.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), 0);
    Rng shuffler(derive_seed(run.seed, {kShuffleStream, epoch}));
    shuffler.shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += run.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + run.batch_size);
      auto bg = batch_gradients(cfg, params, train_set, std::span<const std::size_t>(order).subspan(lo, hi - lo),
                                weights, run, epoch);
      if (run.clip_norm > 0.0) clip_global_norm(bg.grads, run.clip_norm);
      adam_step(tensors, bg.grads, adam, run.adam);
      loss_sum += bg.loss_sum;
    }
    if (!params.all_finite()) throw NumericError("parameters became non-finite in epoch " + std::to_string(epoch));

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train_set.size());
    rec.val_f1_sample = rec.val_f1_window = nan;
    if (!validation.empty()) {
      auto predictor = [&](const Tensor& w) { return model::predict(w, params, cfg).label(); };
      rec.val_f1_sample =
          evaluation::score_sample_wise(predictor, validation, cfg.window_length, cfg.num_classes, threads).macro_f1;
      rec.val_f1_window =
          evaluation::score_window_wise(predictor, validation, cfg.window_length, cfg.num_classes, threads).macro_f1;
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    const double score = run.mode == TrainMode::SampleWise ? rec.val_f1_sample : rec.val_f1_window;
    if (std::isnan(score)) {
      // Nothing to select on: keep the latest parameters, never stop early.
      result.best_params = params;
      result.best_epoch = epoch;
      continue;
    }
    if (!have_best || score > result.best_val_f1) {
      have_best = true;
      result.best_val_f1 = score;
      result.best_epoch = epoch;
      result.best_params = params;
      stale = 0;
    } else if (++stale > run.patience) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history, bool include_wall_time) {
  std::string out = "epoch,train_loss,val_f1_sample,val_f1_window";
  if (include_wall_time) out += ",wall_time";
  out += '\n';
  for (const auto& r : history) {
    out += std::to_string(r.epoch) + ',' + format_double(r.train_loss) + ',' + format_double(r.val_f1_sample) + ',' +
           format_double(r.val_f1_window);
    if (include_wall_time) out += ',' + format_double(r.wall_seconds);
    out += '\n';
  }
  return out;
}

}  // namespace sahar::training
