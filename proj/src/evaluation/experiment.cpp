// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/evaluation/experiment.hpp"

#include <algorithm>

#include "sahar/data/splits.hpp"
#include "sahar/errors.hpp"
#include "sahar/io.hpp"
#include "sahar/model/model.hpp"
#include "sahar/parallel.hpp"

namespace sahar::evaluation {

namespace {

constexpr std::uint64_t kFoldStream = 0x4c4f;
constexpr std::uint64_t kInitStream = 0x494e;

double mean_of(const std::vector<FoldOutcome>& folds, bool sample) {
  double s = 0.0;
  for (const auto& f : folds) s += sample ? f.sample_wise.macro_f1 : f.window_wise.macro_f1;
  return s / static_cast<double>(folds.size());
}

}  // namespace

data::WindowedDataset training_windows(const std::vector<data::RawRecording>& recs, std::size_t window_length,
                                       training::TrainMode mode, double overlap) {
  data::WindowedDataset out;
  out.window_length = window_length;
  for (const auto& r : recs) {
    out.num_channels = r.num_channels();
    if (r.num_samples() < window_length) continue;
    if (mode == training::TrainMode::SampleWise) {
      out.append(data::make_windows_with_stride(r, window_length, 1, data::WindowLabeling::LastSample));
    } else {
      out.append(data::make_windows(r, window_length, overlap, data::WindowLabeling::Majority));
    }
  }
  return out;
}

PreparedSplits normalize_splits(std::vector<data::RawRecording> train, std::vector<data::RawRecording> val,
                                std::vector<data::RawRecording> test, bool normalize) {
  PreparedSplits out;
  if (normalize && !train.empty()) {
    out.stats = data::compute_stats(train);
    for (auto* set : {&train, &val, &test}) {
      for (auto& r : *set) r = data::normalize(r, out.stats).first;
    }
  }
  out.train = std::move(train);
  out.val = std::move(val);
  out.test = std::move(test);
  return out;
}

std::size_t drop_short(std::vector<data::RawRecording>& recs, std::size_t window_length) {
  const auto before = recs.size();
  std::erase_if(recs, [&](const data::RawRecording& r) { return r.num_samples() < window_length; });
  return before - recs.size();
}

RunOutcome train_and_evaluate(std::vector<data::RawRecording> train, std::vector<data::RawRecording> val,
                              std::vector<data::RawRecording> test, const PipelineSettings& settings,
                              const EpochCallback& on_epoch) {
  const auto& cfg = settings.model;
  cfg.validate();
  auto prepared = normalize_splits(std::move(train), std::move(val), std::move(test), settings.normalize);
  drop_short(prepared.val, cfg.window_length);
  drop_short(prepared.test, cfg.window_length);
  const auto windows = training_windows(prepared.train, cfg.window_length, settings.train.mode, settings.overlap);

  Rng init_rng(derive_seed(settings.train.seed, {kInitStream}));
  RunOutcome out;
  out.stats = prepared.stats;
  out.training =
      training::train(cfg, model::init_params(cfg, init_rng), windows, prepared.val, settings.train, on_epoch);
  const auto& params = out.training.best_params;
  auto predictor = [&](const Tensor& w) { return model::predict(w, params, cfg).label(); };
  const std::size_t threads = resolve_threads(settings.train.threads);
  out.sample_wise = score_sample_wise(predictor, prepared.test, cfg.window_length, cfg.num_classes, threads);
  out.window_wise = score_window_wise(predictor, prepared.test, cfg.window_length, cfg.num_classes, threads);
  return out;
}

std::uint64_t fold_seed(std::uint64_t base_seed, std::size_t fold_index) {
  return derive_seed(base_seed, {kFoldStream, fold_index});
}

LosoSummary run_loso(const std::vector<data::RawRecording>& recordings, const PipelineSettings& settings,
                     const LosoHooks& hooks) {
  const auto folds = data::loso_splits(recordings);
  LosoSummary summary;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    const auto& fold = folds[i];
    if (hooks.completed) {
      if (auto done = hooks.completed(fold.held_out_subject)) {
        summary.folds.push_back(*done);
        continue;
      }
    }
    auto inner = data::split_benchmark(fold.train, {}, settings.val_fraction);
    PipelineSettings fs = settings;
    fs.train.seed = fold_seed(settings.train.seed, i);
    auto run = train_and_evaluate(std::move(inner.train), std::move(inner.val), fold.test, fs, hooks.on_epoch);
    FoldOutcome f{fold.held_out_subject, fs.train.seed, run.training.best_epoch, run.sample_wise, run.window_wise};
    if (hooks.on_fold) hooks.on_fold(f, run);
    summary.folds.push_back(std::move(f));
  }
  summary.mean_sample_wise = mean_of(summary.folds, true);
  summary.mean_window_wise = mean_of(summary.folds, false);
  return summary;
}

EvalReport loso_report(const LosoSummary& summary, const std::vector<std::string>& class_names) {
  EvalReport r;
  r.class_names = class_names;
  for (const auto& f : summary.folds) r.entries.push_back({f.subject, f.sample_wise, f.window_wise});
  r.mean_sample_wise = summary.mean_sample_wise;
  r.mean_window_wise = summary.mean_window_wise;
  r.notes.push_back("mean is the unweighted average over folds");
  r.notes.push_back("sample-wise scores exclude the first T-1 samples of each recording");
  return r;
}

std::vector<SweepRow> window_size_sweep(const std::vector<data::RawRecording>& train,
                                        const std::vector<data::RawRecording>& val,
                                        const std::vector<data::RawRecording>& test,
                                        const std::vector<std::size_t>& sizes, const PipelineSettings& settings,
                                        double sampling_rate_hz, const std::function<void(const SweepRow&)>& on_row) {
  if (sizes.empty()) throw ConfigError("window size sweep needs at least one size");
  std::vector<SweepRow> rows;
  for (auto t : sizes) {
    PipelineSettings s = settings;
    s.model.window_length = t;
    auto run = train_and_evaluate(train, val, test, s);
    SweepRow row{t, static_cast<double>(t) / sampling_rate_hz, run.sample_wise.macro_f1, run.window_wise.macro_f1};
    if (on_row) on_row(row);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "window_size_samples,window_size_seconds,f1_sample,f1_window\n";
  for (const auto& r : rows) {
    out += std::to_string(r.window_length) + ',' + format_double(r.window_seconds) + ',' + format_double(r.f1_sample) +
           ',' + format_double(r.f1_window) + '\n';
  }
  return out;
}

}  // namespace sahar::evaluation
