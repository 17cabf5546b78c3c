// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// One JSON file per experiment. Loading order: built-in defaults, then the
// file (deep-merged), then dotted-path overrides such as
// "train.max_epochs=20". Unknown keys are rejected. Relative paths are
// taken relative to the config file's directory (the working directory when
// there is no file).

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sahar/data/schema.hpp"
#include "sahar/model/config.hpp"
#include "sahar/training/trainer.hpp"

namespace sahar::app {

struct RecordingSource {
  std::string subject;
  std::filesystem::path path;
  bool operator==(const RecordingSource&) const = default;
};

enum class SplitMode { Subjects, Fraction };

struct ExperimentConfig {
  std::filesystem::path schema;
  std::vector<RecordingSource> recordings;
  std::filesystem::path cache_dir;  // empty: <output>/cache

  std::size_t keep_every = 1;
  bool impute = true;
  bool normalize = true;
  std::optional<data::NullPolicy> null_policy;  // empty: the schema's default

  std::size_t window_length = 32;
  double overlap = 0.5;

  // Subjects: listed subjects are the test set, the tail of every other
  // recording is validation. Fraction: every recording is cut by time.
  SplitMode split_mode = SplitMode::Subjects;
  std::vector<std::string> test_subjects;
  double val_fraction = 0.1;
  double train_fraction = 0.8;

  // window_length, num_channels and num_classes are filled from the data.
  model::ModelConfig model;
  training::TrainRunConfig train;
  bool log_wall_time = false;

  std::filesystem::path output = "runs/experiment";

  void validate() const;
  std::filesystem::path effective_cache_dir() const;

  // Paths are written as given (already resolved by the loader).
  nlohmann::json to_json() const;
  // Strict parse of a complete document. Relative paths resolve against `base_dir`.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
};

nlohmann::json default_config_json();

// Deep merge: objects merge key by key, everything else replaces.
void merge_json(nlohmann::json& into, const nlohmann::json& from);

// "a.b.c=value". The value is parsed as JSON when possible and taken as a
// string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

ExperimentConfig load_experiment_config(const std::optional<std::filesystem::path>& file,
                                        const std::vector<std::string>& overrides);

// Trailing digits of the file stem ("subject106.dat" -> "106"), else the whole stem.
std::string subject_from_path(const std::filesystem::path& path);

const char* to_string(SplitMode mode);

}  // namespace sahar::app
