// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Train-then-test runs over prepared recordings: labels already mapped to
// class indices (kNullLabel where null samples are dropped), missing values
// imputed, sampling rate final. Normalisation statistics come from the
// training recordings only.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sahar/data/recording.hpp"
#include "sahar/data/windows.hpp"
#include "sahar/evaluation/protocols.hpp"
#include "sahar/evaluation/report.hpp"
#include "sahar/model/config.hpp"
#include "sahar/training/trainer.hpp"

namespace sahar::evaluation {

struct PipelineSettings {
  model::ModelConfig model;  // window_length, num_channels, num_classes filled in
  training::TrainRunConfig train;
  double overlap = 0.5;  // window-wise training windows
  bool normalize = true;
  double val_fraction = 0.1;  // validation tail carved from each training recording in LOSO
};

// Training windows for the configured mode (stride 1 + last-sample labels, or
// overlapping majority windows). Recordings shorter than T contribute nothing.
data::WindowedDataset training_windows(const std::vector<data::RawRecording>& recs, std::size_t window_length,
                                       training::TrainMode mode, double overlap);

struct PreparedSplits {
  std::vector<data::RawRecording> train, val, test;
  std::optional<data::NormalizationStats> stats;
};

// Fits normalisation on `train` (when enabled) and applies it to all three.
PreparedSplits normalize_splits(std::vector<data::RawRecording> train, std::vector<data::RawRecording> val,
                                std::vector<data::RawRecording> test, bool normalize);

// Drops recordings shorter than T; returns how many were dropped.
std::size_t drop_short(std::vector<data::RawRecording>& recs, std::size_t window_length);

struct RunOutcome {
  training::TrainResult training;
  std::optional<data::NormalizationStats> stats;
  ProtocolScores sample_wise;  // on the test recordings
  ProtocolScores window_wise;
};

using EpochCallback = std::function<void(const training::EpochRecord&)>;

RunOutcome train_and_evaluate(std::vector<data::RawRecording> train, std::vector<data::RawRecording> val,
                              std::vector<data::RawRecording> test, const PipelineSettings& settings,
                              const EpochCallback& on_epoch = {});

struct FoldOutcome {
  std::string subject;
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  ProtocolScores sample_wise;
  ProtocolScores window_wise;
};

std::uint64_t fold_seed(std::uint64_t base_seed, std::size_t fold_index);

struct LosoHooks {
  // Returns a finished fold to reuse instead of retraining it.
  std::function<std::optional<FoldOutcome>(const std::string& subject)> completed;
  std::function<void(const FoldOutcome&, const RunOutcome&)> on_fold;
  EpochCallback on_epoch;
};

struct LosoSummary {
  std::vector<FoldOutcome> folds;
  double mean_sample_wise = 0.0;
  double mean_window_wise = 0.0;
};

// One fold per subject in order of first appearance; fresh initialisation and
// a fold-derived seed each time; unweighted mean over folds.
LosoSummary run_loso(const std::vector<data::RawRecording>& recordings, const PipelineSettings& settings,
                     const LosoHooks& hooks = {});

EvalReport loso_report(const LosoSummary& summary, const std::vector<std::string>& class_names);

struct SweepRow {
  std::size_t window_length = 0;
  double window_seconds = 0.0;
  double f1_sample = 0.0;
  double f1_window = 0.0;
};

// One full train + test run per size, in the given order, each with the same seed.
std::vector<SweepRow> window_size_sweep(const std::vector<data::RawRecording>& train,
                                        const std::vector<data::RawRecording>& val,
                                        const std::vector<data::RawRecording>& test,
                                        const std::vector<std::size_t>& sizes, const PipelineSettings& settings,
                                        double sampling_rate_hz,
                                        const std::function<void(const SweepRow&)>& on_row = {});

// window_size_samples,window_size_seconds,f1_sample,f1_window
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sahar::evaluation
