// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/app/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "sahar/data/dataset_cache.hpp"
#include "sahar/errors.hpp"
#include "sahar/evaluation/experiment.hpp"
#include "sahar/evaluation/metrics.hpp"
#include "sahar/io.hpp"
#include "sahar/model/checkpoint.hpp"
#include "sahar/model/model.hpp"
#include "sahar/parallel.hpp"

namespace sahar::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kCacheFormat = 1;

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Refuses to reuse a non-empty command directory unless forced; forced runs start empty.
void claim_directory(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
    if (!force) throw IoError(dir.string() + " already exists; pass --force to overwrite it");
    fs::remove_all(dir, ec);
    if (ec) throw IoError("cannot clear " + dir.string() + ": " + ec.message());
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string file_token(const std::string& s) {
  std::string out;
  for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' ? ch : '_';
  return out.empty() ? "_" : out;
}

json recording_key(const ExperimentConfig& cfg, const data::DatasetSchema& schema, data::NullPolicy policy) {
  json files = json::array();
  for (const auto& src : cfg.recordings) {
    if (!fs::exists(src.path)) throw IoError("data file not found: " + src.path.string());
    files.push_back({{"subject", src.subject}, {"path", src.path.string()}, {"content", hash_hex(read_file(src.path))}});
  }
  return {{"format", kCacheFormat},
          {"schema", schema.hash()},
          {"keep_every", cfg.keep_every},
          {"impute", cfg.impute},
          {"null_policy", data::to_string(policy)},
          {"files", files}};
}

std::optional<std::vector<data::RawRecording>> load_recording_cache(const fs::path& dir, const json& key,
                                                                    const Logger& log) {
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) return std::nullopt;
  try {
    const json m = json::parse(read_file(manifest_path));
    if (m.at("key") != key) return std::nullopt;
    std::vector<data::RawRecording> out;
    for (const auto& stem : m.at("stems")) out.push_back(data::load_cached_recording(dir / stem.get<std::string>()));
    return out;
  } catch (const std::exception& e) {
    say(log, std::string("recording cache unusable, re-reading raw files: ") + e.what());
    return std::nullopt;
  }
}

data::DataSplit make_split(const ExperimentConfig& cfg, const std::vector<data::RawRecording>& recs) {
  if (cfg.split_mode == SplitMode::Subjects) {
    return data::split_benchmark(recs, {cfg.test_subjects.begin(), cfg.test_subjects.end()}, cfg.val_fraction);
  }
  data::DataSplit out;
  for (const auto& r : recs) {
    auto part = data::split_by_time(r, cfg.train_fraction, cfg.val_fraction);
    for (auto& x : part.train) out.train.push_back(std::move(x));
    for (auto& x : part.val) out.val.push_back(std::move(x));
    for (auto& x : part.test) out.test.push_back(std::move(x));
  }
  return out;
}

evaluation::PipelineSettings pipeline(const ExperimentConfig& cfg, const PreparedData& d) {
  evaluation::PipelineSettings s;
  s.model = resolved_model(cfg, d);
  s.train = cfg.train;
  s.overlap = cfg.overlap;
  s.normalize = cfg.normalize;
  s.val_fraction = cfg.val_fraction;
  return s;
}

evaluation::EpochCallback epoch_logger(const Logger& log, std::vector<training::EpochRecord>* keep = nullptr) {
  return [log, keep](const training::EpochRecord& r) {
    if (keep) keep->push_back(r);
    say(log, "epoch " + std::to_string(r.epoch) + " loss " + format_double(r.train_loss) + " val f1 sample " +
                 format_double(r.val_f1_sample) + " window " + format_double(r.val_f1_window));
  };
}

std::string timing_csv(const std::vector<training::EpochRecord>& h) {
  std::string out = "epoch,wall_time\n";
  for (const auto& r : h) out += std::to_string(r.epoch) + ',' + format_double(r.wall_seconds) + '\n';
  return out;
}

json training_meta(const training::TrainResult& t, const ExperimentConfig& cfg) {
  return {{"best_epoch", t.best_epoch},
          {"best_val_f1", number_or_null(t.best_val_f1)},
          {"epochs_run", t.history.size()},
          {"stopped_early", t.stopped_early},
          {"mode", training::to_string(cfg.train.mode)}};
}

void write_run(const fs::path& dir, const ExperimentConfig& cfg, const PreparedData& d,
               const evaluation::RunOutcome& run, const model::ModelConfig& m) {
  write_file_atomic(dir / "history.csv", training::history_csv(run.training.history, cfg.log_wall_time));
  write_file_atomic(dir / "timing.csv", timing_csv(run.training.history));
  model::CheckpointMeta meta;
  meta.seed = cfg.train.seed;
  meta.class_names = d.class_names;
  meta.sensor_names = d.sensor_names;
  meta.normalization = run.stats;
  meta.schema_hash = d.schema.hash();
  meta.training = training_meta(run.training, cfg);
  model::save_checkpoint(dir / "checkpoint", {m, run.training.best_params, meta});
}

json scores_json(const evaluation::ProtocolScores& s) {
  return {{"macro_f1", number_or_null(s.macro_f1)}, {"scored", s.scored}, {"confusion", s.confusion.to_json()}};
}

evaluation::ProtocolScores scores_from_json(const json& j) {
  evaluation::ProtocolScores s;
  s.confusion = evaluation::confusion_from_json(j.at("confusion"));
  s.scored = j.at("scored").get<std::size_t>();
  s.macro_f1 = s.confusion.total() == 0 ? std::nan("") : evaluation::macro_f1(s.confusion);
  return s;
}

const std::vector<data::RawRecording>& pick_split(const PreparedData& d, const std::string& split) {
  if (split == "train") return d.split.train;
  if (split == "val") return d.split.val;
  if (split == "test") return d.split.test;
  throw ConfigError("split must be train, val or test, got '" + split + "'");
}

// Loads a checkpoint and checks it against the config and the loaded data.
model::Checkpoint compatible_checkpoint(const fs::path& path, const ExperimentConfig& cfg, const PreparedData& d) {
  auto ckpt = model::load_checkpoint(path);
  model::require_compatible(resolved_model(cfg, d), ckpt.config);
  std::vector<std::string> diffs;
  if (!ckpt.meta.schema_hash.empty() && ckpt.meta.schema_hash != d.schema.hash()) {
    diffs.push_back("schema_hash: config " + d.schema.hash() + ", checkpoint " + ckpt.meta.schema_hash);
  }
  if (!ckpt.meta.sensor_names.empty() && ckpt.meta.sensor_names != d.sensor_names) diffs.push_back("sensor_names");
  if (!ckpt.meta.class_names.empty() && ckpt.meta.class_names != d.class_names) diffs.push_back("class_names");
  if (!diffs.empty()) {
    std::string msg = "checkpoint does not match the data:";
    for (const auto& x : diffs) msg += "\n  " + x;
    throw CompatibilityError(msg);
  }
  return ckpt;
}

std::vector<data::RawRecording> normalized_split(const PreparedData& d, const std::string& split,
                                                 const model::Checkpoint& ckpt) {
  auto recs = pick_split(d, split);
  if (ckpt.meta.normalization) {
    for (auto& r : recs) r = data::normalize(r, ckpt.meta.normalization).first;
  }
  evaluation::drop_short(recs, ckpt.config.window_length);
  if (recs.empty()) throw DataError("split '" + split + "' has no recording of at least window length");
  return recs;
}

std::size_t class_by_name(const std::string& token, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == token) return i;
  }
  const bool numeric = !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (numeric) {
    const auto i = std::stoul(token);
    if (i < names.size()) return i;
  }
  throw ConfigError("unknown class '" + token + "'");
}

}  // namespace

double PreparedData::sampling_rate_hz() const {
  return recordings.empty() ? schema.sampling_rate_hz : recordings.front().sampling_rate_hz;
}

model::ModelConfig resolved_model(const ExperimentConfig& cfg, const PreparedData& d) {
  model::ModelConfig m = cfg.model;
  m.window_length = cfg.window_length;
  m.num_channels = d.sensor_names.size();
  m.num_classes = d.class_names.size();
  m.validate();
  return m;
}

Protocol parse_protocol(const std::string& text) {
  if (text == "sample") return Protocol::Sample;
  if (text == "window") return Protocol::Window;
  if (text == "both") return Protocol::Both;
  throw ConfigError("protocol must be sample, window or both, got '" + text + "'");
}

PreparedData prepare_data(const ExperimentConfig& cfg, const Logger& log) {
  PreparedData d;
  d.schema = data::load_schema(cfg.schema);
  d.null_policy = cfg.null_policy.value_or(d.schema.default_null_policy());
  d.class_names = d.schema.class_names(d.null_policy);
  d.sensor_names = d.schema.sensor_names();

  const fs::path dir = cfg.effective_cache_dir() / "recordings";
  const json key = recording_key(cfg, d.schema, d.null_policy);
  if (auto cached = load_recording_cache(dir, key, log)) {
    d.recordings = std::move(*cached);
    d.from_cache = true;
    say(log, "using cached recordings in " + dir.string());
  } else {
    const int null_index = static_cast<int>(d.schema.num_vocabulary_classes());
    json stems = json::array();
    for (std::size_t i = 0; i < cfg.recordings.size(); ++i) {
      const auto& src = cfg.recordings[i];
      say(log, "reading " + src.path.string());
      auto rec = data::load_recording_file(d.schema, src.path.string(), src.subject);
      if (cfg.impute) rec = data::impute_missing(rec);
      rec = data::downsample(rec, cfg.keep_every);
      rec = data::apply_null_policy(rec, d.null_policy, null_index);
      const std::string stem = std::to_string(i) + "_" + file_token(src.subject);
      data::save_recording(dir / stem, rec);
      stems.push_back(stem);
      d.recordings.push_back(std::move(rec));
    }
    write_file_atomic(dir / "manifest.json", dump({{"key", key}, {"stems", stems}}));
  }
  d.split = make_split(cfg, d.recordings);
  return d;
}

json cmd_ingest(const ExperimentConfig& cfg, const Logger& log) {
  const auto d = prepare_data(cfg, log);
  const auto settings = pipeline(cfg, d);
  auto prepared = evaluation::normalize_splits(d.split.train, d.split.val, d.split.test, cfg.normalize);

  const fs::path dir = cfg.effective_cache_dir();
  const data::CacheKey key{d.schema.hash(), hash_hex(cfg.to_json().dump())};
  json counts = json::object();
  auto store = [&](const std::string& name, data::WindowedDataset ds) {
    ds.normalization_stats = prepared.stats;
    data::save_windowed(dir / name, ds, key);
    counts[name] = ds.size();
  };
  const std::size_t t = cfg.window_length;
  store("train", evaluation::training_windows(prepared.train, t, cfg.train.mode, cfg.overlap));
  for (const auto& [name, recs] : {std::pair{"val", &prepared.val}, std::pair{"test", &prepared.test}}) {
    data::WindowedDataset ds;
    ds.window_length = t;
    ds.num_channels = d.sensor_names.size();
    for (const auto& r : *recs) {
      if (r.num_samples() >= t) ds.append(data::make_boundary_padded_windows(r, t));
    }
    store(name, std::move(ds));
  }
  json subjects = json::array();
  for (const auto& s : data::subject_ids(d.recordings)) subjects.push_back(s);
  const json manifest{{"schema_hash", key.schema_hash},
                      {"settings_hash", key.settings_hash},
                      {"window_length", t},
                      {"num_channels", d.sensor_names.size()},
                      {"class_names", d.class_names},
                      {"sensor_names", d.sensor_names},
                      {"subjects", subjects},
                      {"windows", counts}};
  write_file_atomic(dir / "manifest.json", dump(manifest));
  say(log, "cached windows in " + dir.string());
  json out = manifest;
  out["cache_dir"] = dir.string();
  out["recordings"] = d.recordings.size();
  out["model"] = settings.model.to_json();
  return out;
}

json cmd_train(const ExperimentConfig& cfg, bool force, const Logger& log) {
  const fs::path dir = cfg.output / "train";
  if (fs::exists(dir) && !force && !fs::is_empty(dir)) claim_directory(dir, false);
  const auto d = prepare_data(cfg, log);
  const auto settings = pipeline(cfg, d);
  claim_directory(dir, force);
  write_file_atomic(dir / "config.json", dump(cfg.to_json()));

  const auto run = evaluation::train_and_evaluate(d.split.train, d.split.val, d.split.test, settings, epoch_logger(log));
  write_run(dir, cfg, d, run, settings.model);

  json summary = training_meta(run.training, cfg);
  summary["run_dir"] = dir.string();
  summary["checkpoint"] = (dir / "checkpoint").string();
  if (!d.split.test.empty()) {
    evaluation::EvalReport report;
    report.class_names = d.class_names;
    report.entries.push_back({"test", run.sample_wise, run.window_wise});
    report.notes.push_back("sample-wise scores exclude the first T-1 samples of each recording");
    write_file_atomic(dir / "report.json", dump(report.to_json()));
    write_file_atomic(dir / "report.txt", report.to_table());
    summary["test"] = {{"sample_wise", scores_json(run.sample_wise)}, {"window_wise", scores_json(run.window_wise)}};
  }
  write_file_atomic(dir / "summary.json", dump(summary));
  say(log, "wrote " + dir.string());
  return summary;
}

json cmd_eval(const ExperimentConfig& cfg, const fs::path& checkpoint, Protocol protocol, const std::string& split,
              bool force, const Logger& log) {
  const auto d = prepare_data(cfg, log);
  const auto ckpt = compatible_checkpoint(checkpoint, cfg, d);
  const auto recs = normalized_split(d, split, ckpt);
  const fs::path dir = cfg.output / "eval" / split;
  claim_directory(dir, force);

  auto predictor = [&](const Tensor& w) { return model::predict(w, ckpt.params, ckpt.config).label(); };
  const std::size_t threads = resolve_threads(cfg.train.threads);
  const std::size_t t = ckpt.config.window_length, c = ckpt.config.num_classes;
  evaluation::ReportEntry entry{split, std::nullopt, std::nullopt};
  if (protocol != Protocol::Window) entry.sample_wise = evaluation::score_sample_wise(predictor, recs, t, c, threads);
  if (protocol != Protocol::Sample) entry.window_wise = evaluation::score_window_wise(predictor, recs, t, c, threads);

  evaluation::EvalReport report;
  report.class_names = d.class_names;
  report.entries.push_back(entry);
  report.notes.push_back("checkpoint: " + fs::absolute(checkpoint).string());
  if (entry.sample_wise) report.notes.push_back("sample-wise scores exclude the first T-1 samples of each recording");
  write_file_atomic(dir / "report.json", dump(report.to_json()));
  write_file_atomic(dir / "report.txt", report.to_table());

  json out{{"split", split}, {"report", (dir / "report.json").string()}};
  if (entry.sample_wise) out["sample_wise"] = scores_json(*entry.sample_wise);
  if (entry.window_wise) out["window_wise"] = scores_json(*entry.window_wise);
  say(log, report.to_table());
  return out;
}

json cmd_loso(const ExperimentConfig& cfg, bool force, const Logger& log) {
  const fs::path dir = cfg.output / "loso";
  const json echoed = cfg.to_json();
  if (fs::exists(dir / "config.json")) {
    const json stored = json::parse(read_file(dir / "config.json"), nullptr, false);
    if (force) {
      claim_directory(dir, true);
    } else if (stored != echoed) {
      throw ConfigError(dir.string() + " holds folds from a different config; pass --force to start over");
    } else {
      say(log, "resuming " + dir.string());
    }
  } else {
    claim_directory(dir, force);
  }
  write_file_atomic(dir / "config.json", dump(echoed));

  const auto d = prepare_data(cfg, log);
  if (data::subject_ids(d.recordings).size() < 2) throw DataError("leave-one-subject-out needs at least two subjects");
  const auto settings = pipeline(cfg, d);

  evaluation::LosoHooks hooks;
  hooks.completed = [&](const std::string& subject) -> std::optional<evaluation::FoldOutcome> {
    const auto path = dir / ("fold_" + file_token(subject)) / "fold.json";
    if (!fs::exists(path)) return std::nullopt;
    try {
      const json j = json::parse(read_file(path));
      evaluation::FoldOutcome f;
      f.subject = j.at("subject").get<std::string>();
      f.seed = j.at("seed").get<std::uint64_t>();
      f.best_epoch = j.at("best_epoch").get<std::size_t>();
      f.sample_wise = scores_from_json(j.at("sample_wise"));
      f.window_wise = scores_from_json(j.at("window_wise"));
      if (f.subject != subject) return std::nullopt;
      say(log, "fold " + subject + " already complete");
      return f;
    } catch (const std::exception& e) {
      say(log, "fold " + subject + " is incomplete (" + e.what() + "); retraining");
      return std::nullopt;
    }
  };
  hooks.on_fold = [&](const evaluation::FoldOutcome& f, const evaluation::RunOutcome& run) {
    const auto fold_dir = dir / ("fold_" + file_token(f.subject));
    ExperimentConfig fc = cfg;
    fc.train.seed = f.seed;
    write_run(fold_dir, fc, d, run, settings.model);
    evaluation::EvalReport r;
    r.class_names = d.class_names;
    r.entries.push_back({f.subject, f.sample_wise, f.window_wise});
    write_file_atomic(fold_dir / "report.json", dump(r.to_json()));
    write_file_atomic(fold_dir / "report.txt", r.to_table());
    // Written last: its presence marks the fold as complete.
    write_file_atomic(fold_dir / "fold.json", dump({{"subject", f.subject},
                                                    {"seed", f.seed},
                                                    {"best_epoch", f.best_epoch},
                                                    {"sample_wise", scores_json(f.sample_wise)},
                                                    {"window_wise", scores_json(f.window_wise)}}));
    say(log, "fold " + f.subject + " sample-wise " + format_double(f.sample_wise.macro_f1) + " window-wise " +
                 format_double(f.window_wise.macro_f1));
  };
  hooks.on_epoch = epoch_logger(log);

  const auto summary = evaluation::run_loso(d.recordings, settings, hooks);
  const auto report = evaluation::loso_report(summary, d.class_names);
  json sj = report.to_json();
  json folds = json::array();
  for (const auto& f : summary.folds) {
    folds.push_back({{"subject", f.subject}, {"seed", f.seed}, {"best_epoch", f.best_epoch},
                     {"dir", "fold_" + file_token(f.subject)}});
  }
  sj["folds"] = folds;
  write_file_atomic(dir / "summary.json", dump(sj));
  write_file_atomic(dir / "summary.txt", report.to_table());
  say(log, report.to_table());
  return {{"dir", dir.string()},
          {"folds", summary.folds.size()},
          {"mean_sample_wise", number_or_null(summary.mean_sample_wise)},
          {"mean_window_wise", number_or_null(summary.mean_window_wise)}};
}

json cmd_sweep(const ExperimentConfig& cfg, const std::vector<std::size_t>& sizes, bool force, const Logger& log) {
  if (sizes.empty()) throw ConfigError("sweep needs at least one window size");
  const fs::path dir = cfg.output / "sweep";
  if (fs::exists(dir) && !force && !fs::is_empty(dir)) claim_directory(dir, false);
  const auto d = prepare_data(cfg, log);
  auto settings = pipeline(cfg, d);
  for (auto t : sizes) {
    auto m = settings.model;
    m.window_length = t;
    m.validate();
  }
  claim_directory(dir, force);
  json echoed = cfg.to_json();
  echoed["sweep_sizes"] = sizes;
  write_file_atomic(dir / "config.json", dump(echoed));
  const auto rows = evaluation::window_size_sweep(
      d.split.train, d.split.val, d.split.test, sizes, settings, d.sampling_rate_hz(),
      [&](const evaluation::SweepRow& r) {
        say(log, "window " + std::to_string(r.window_length) + " sample-wise " + format_double(r.f1_sample) +
                     " window-wise " + format_double(r.f1_window));
      });
  write_file_atomic(dir / "sweep.csv", evaluation::sweep_csv(rows));
  json out{{"csv", (dir / "sweep.csv").string()}, {"rows", json::array()}};
  for (const auto& r : rows) {
    out["rows"].push_back({{"window_length", r.window_length},
                           {"window_seconds", r.window_seconds},
                           {"f1_sample", number_or_null(r.f1_sample)},
                           {"f1_window", number_or_null(r.f1_window)}});
  }
  return out;
}

json cmd_attention_maps(const ExperimentConfig& cfg, const fs::path& checkpoint, const std::string& split,
                        const std::vector<std::string>& classes, bool profile, bool force, const Logger& log) {
  const auto d = prepare_data(cfg, log);
  const auto ckpt = compatible_checkpoint(checkpoint, cfg, d);
  const auto recs = normalized_split(d, split, ckpt);
  const auto& m = ckpt.config;

  std::vector<std::size_t> selected;
  if (classes.empty()) {
    for (std::size_t c = 0; c < m.num_classes; ++c) selected.push_back(c);
  } else {
    for (const auto& token : classes) selected.push_back(class_by_name(token, d.class_names));
  }

  data::WindowedDataset windows;
  for (const auto& r : recs) windows.append(data::make_boundary_padded_windows(r, m.window_length));
  std::vector<model::Prediction> preds(windows.size());
  parallel_for(windows.size(), resolve_threads(cfg.train.threads),
               [&](std::size_t i) { preds[i] = model::predict(windows.windows[i], ckpt.params, m); });

  std::vector<Tensor> sums(m.num_classes, Tensor({m.window_length, m.num_channels}));
  std::vector<std::size_t> counts(m.num_classes, 0);
  for (const auto& p : preds) {
    const auto c = p.label();
    sums[c] += p.artifacts.sensor_scores;
    ++counts[c];
  }

  const fs::path dir = cfg.output / "attention" / split;
  claim_directory(dir, force);
  json written = json::array(), skipped = json::array();
  for (auto c : selected) {
    const std::string name = d.class_names[c];
    if (counts[c] == 0) {
      say(log, "notice: no window predicted as class '" + name + "'; skipped");
      skipped.push_back(name);
      continue;
    }
    Tensor mean = sums[c];
    mean *= 1.0 / static_cast<double>(counts[c]);
    const std::string base = "class_" + std::to_string(c) + "_" + file_token(name);
    model::write_attention_csv(dir / (base + ".csv"), mean, d.sensor_names);

    Tensor prof({1, m.num_channels});
    for (std::size_t t = 0; t < m.window_length; ++t)
      for (std::size_t s = 0; s < m.num_channels; ++s) prof.at(0, s) += mean.at(t, s);
    prof *= 1.0 / static_cast<double>(m.window_length);
    json entry{{"class", name}, {"windows", counts[c]}, {"map", (dir / (base + ".csv")).string()},
               {"mean_scores", std::vector<double>(prof.data().begin(), prof.data().end())}};
    if (profile) {
      model::write_attention_csv(dir / (base + "_profile.csv"), prof, d.sensor_names);
      entry["profile"] = (dir / (base + "_profile.csv")).string();
    }
    written.push_back(entry);
  }
  const json out{{"dir", dir.string()}, {"sensor_names", d.sensor_names}, {"windows", windows.size()},
                 {"classes", written}, {"skipped", skipped}};
  write_file_atomic(dir / "summary.json", dump(out));
  return out;
}

json cmd_synth(const fs::path& out_dir, const SynthOptions& options, bool force, const Logger& log) {
  options.spec.validate();
  if (options.subjects < 1 || options.segments < 1 || options.segment_length < 1) {
    throw ConfigError("synth: subjects, segments and segment length must be >= 1");
  }
  claim_directory(out_dir, force);
  Rng rng(options.seed);
  json files = json::array();
  std::string last_subject;
  for (std::size_t i = 0; i < options.subjects; ++i) {
    last_subject = std::to_string(101 + i);
    const auto rec = app::planted_recording(options.spec, options.segments, options.segment_length, last_subject, rng);
    const std::string file = "subject" + last_subject + ".csv";
    write_file_atomic(out_dir / file, app::planted_csv(rec));
    files.push_back(file);
  }
  write_file_atomic(out_dir / "schema.json", dump(app::planted_schema(options.spec).to_json()));

  json config = {
      {"schema", "schema.json"},
      {"data", {{"recordings", files}}},
      {"window", {{"length", 32}, {"overlap", 0.5}}},
      {"split", {{"mode", "subjects"}, {"test_subjects", {last_subject}}, {"val_fraction", 0.2}}},
      {"model",
       {{"d_model", 16}, {"n_blocks", 1}, {"n_heads", 2}, {"ffn_dim", 32}, {"k_filters", 4}, {"sa_kernel_sensor", 1},
        {"dropout", 0.1}}},
      {"train", {{"batch_size", 16}, {"max_epochs", 30}, {"patience", 10}, {"seed", options.seed}}},
      {"output", "runs"}};
  if (options.subjects < 2) config["split"] = {{"mode", "fraction"}, {"train_fraction", 0.6}, {"val_fraction", 0.2}};
  write_file_atomic(out_dir / "experiment.json", dump(config));
  say(log, "wrote " + std::to_string(options.subjects) + " synthetic recordings to " + out_dir.string());
  return {{"dir", out_dir.string()},
          {"config", (out_dir / "experiment.json").string()},
          {"schema", (out_dir / "schema.json").string()},
          {"recordings", files},
          {"informative_channel", options.spec.informative_channel}};
}

}  // namespace sahar::app
