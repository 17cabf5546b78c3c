// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The command layer behind the CLI and the C API. Every command writes only
// under the configured output directory and returns a JSON summary of what it
// produced.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sahar/app/experiment_config.hpp"
#include "sahar/app/synthetic.hpp"
#include "sahar/data/splits.hpp"

namespace sahar::app {

using Logger = std::function<void(const std::string&)>;

struct PreparedData {
  data::DatasetSchema schema;
  data::NullPolicy null_policy = data::NullPolicy::Drop;
  std::vector<std::string> class_names;
  std::vector<std::string> sensor_names;
  // Imputed, downsampled, null policy applied; not normalised.
  std::vector<data::RawRecording> recordings;
  data::DataSplit split;
  bool from_cache = false;

  double sampling_rate_hz() const;
};

// Loads the schema and recordings, reusing the preprocessed-recording cache
// when its key matches.
PreparedData prepare_data(const ExperimentConfig& cfg, const Logger& log = {});

// Model configuration for `cfg` applied to the loaded data.
model::ModelConfig resolved_model(const ExperimentConfig& cfg, const PreparedData& data);

enum class Protocol { Sample, Window, Both };
Protocol parse_protocol(const std::string& text);

nlohmann::json cmd_ingest(const ExperimentConfig& cfg, const Logger& log = {});
nlohmann::json cmd_train(const ExperimentConfig& cfg, bool force, const Logger& log = {});
// `split` is one of train, val, test.
nlohmann::json cmd_eval(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint, Protocol protocol,
                        const std::string& split, bool force, const Logger& log = {});
nlohmann::json cmd_loso(const ExperimentConfig& cfg, bool force, const Logger& log = {});
nlohmann::json cmd_sweep(const ExperimentConfig& cfg, const std::vector<std::size_t>& sizes, bool force,
                         const Logger& log = {});
// Classes are selected by name or index; empty selects all.
nlohmann::json cmd_attention_maps(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint,
                                  const std::string& split, const std::vector<std::string>& classes, bool profile,
                                  bool force, const Logger& log = {});

struct SynthOptions {
  SyntheticSpec spec;
  std::size_t subjects = 3;
  std::size_t segments = 24;       // per recording
  std::size_t segment_length = 64;  // samples
  std::uint64_t seed = 1;
};

// Writes subject CSVs, schema.json and an experiment.json ready for `train`.
nlohmann::json cmd_synth(const std::filesystem::path& out_dir, const SynthOptions& options, bool force,
                         const Logger& log = {});

}  // namespace sahar::app
