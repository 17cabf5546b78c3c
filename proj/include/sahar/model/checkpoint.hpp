// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// A checkpoint is a directory holding checkpoint.json (config, names, shapes,
// metadata, checksum) and params.bin (tensor dumps in ModelParams::for_each order).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sahar/data/recording.hpp"
#include "sahar/model/config.hpp"
#include "sahar/model/params.hpp"

namespace sahar::model {

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> sensor_names;
  std::optional<data::NormalizationStats> normalization;
  std::string schema_hash;
  nlohmann::json training = nlohmann::json::object();  // best epoch, best F1, ...
};

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  CheckpointMeta meta;
};

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt);

// IntegrityError on a missing/corrupt manifest, checksum mismatch or tensor
// names/shapes that disagree with the stored config.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// CompatibilityError listing every differing field.
void require_compatible(const ModelConfig& expected, const ModelConfig& stored);

// One row per map row, header = sensor names.
void write_attention_csv(const std::filesystem::path& path, const Tensor& map,
                         const std::vector<std::string>& sensor_names);

}  // namespace sahar::model
