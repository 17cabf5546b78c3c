// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sahar/data/recording.hpp"
#include "sahar/data/windows.hpp"
#include "sahar/model/config.hpp"
#include "sahar/model/params.hpp"
#include "sahar/training/adam.hpp"

namespace sahar::training {

// SampleWise trains on stride-1 windows labelled by their last sample and
// selects on sample-wise validation F1; WindowWise uses majority-labelled
// overlapping windows and window-wise validation F1.
enum class TrainMode { SampleWise, WindowWise };

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& s);

struct TrainRunConfig {
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::WindowWise;
  bool class_weighting = false;
  AdamConfig adam;
  double clip_norm = 0.0;  // 0: no clipping
  std::size_t threads = 1;  // 0: hardware concurrency; results do not depend on it

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_f1_sample = 0.0;  // NaN without validation data
  double val_f1_window = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  model::ModelParams best_params;
  std::size_t best_epoch = 0;
  double best_val_f1 = 0.0;  // NaN without validation data
  std::vector<EpochRecord> history;
  bool stopped_early = false;
};

// w_c = N / (C * n_c); classes with no examples get weight 1.
std::vector<double> inverse_frequency_weights(std::span<const int> labels, std::size_t num_classes);

struct BatchGradients {
  std::vector<Tensor> grads;  // ModelParams::for_each order, already divided by the batch size
  double loss_sum = 0.0;      // sum of per-example (weighted) losses
};

// Gradient of the mean batch loss. Dropout draws for example i come from a
// stream derived from (seed, epoch, i); accumulation order is fixed.
BatchGradients batch_gradients(const model::ModelConfig& cfg, const model::ModelParams& params,
                               const data::WindowedDataset& ds, std::span<const std::size_t> batch,
                               std::span<const double> class_weights, const TrainRunConfig& run, std::size_t epoch);

// Mini-batch Adam with per-epoch validation, best-parameter retention and
// early stopping once `patience` consecutive epochs fail to improve.
// ProtocolError on an empty training set.
TrainResult train(const model::ModelConfig& cfg, model::ModelParams initial, const data::WindowedDataset& train_set,
                  const std::vector<data::RawRecording>& validation, const TrainRunConfig& run,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// epoch,train_loss,val_f1_sample,val_f1_window[,wall_time]
std::string history_csv(const std::vector<EpochRecord>& history, bool include_wall_time);

}  // namespace sahar::training
