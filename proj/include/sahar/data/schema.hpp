// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace sahar::data {

enum class ColumnRole { Timestamp, Label, Channel, Ignore };

enum class NullPolicy { Keep, Drop };

struct ColumnSpec {
  std::size_t index = 0;
  ColumnRole role = ColumnRole::Ignore;
  std::string sensor;  // channel columns only, e.g. "hand-accel"
  std::string axis;    // channel columns only, e.g. "x"
};

struct LabelEntry {
  std::string raw;  // token as it appears in the file
  std::size_t class_index = 0;
  std::string name;
};

struct NullClass {
  std::vector<std::string> raw_values;  // tokens explicitly mapped to null
  std::string name = "null";
  NullPolicy default_policy = NullPolicy::Drop;
};

// Describes one dataset's delimited-text layout. Columns not listed are ignored.
struct DatasetSchema {
  std::string name;
  char delimiter = ',';  // ' ' means "runs of whitespace"
  std::size_t header_lines = 0;
  double sampling_rate_hz = 1.0;
  std::vector<ColumnSpec> columns;
  std::vector<LabelEntry> label_vocabulary;
  std::optional<NullClass> null_class;

  // Validates the invariants: one label column, at least one channel, dense class indices.
  void validate() const;

  std::size_t label_column() const;
  std::vector<std::size_t> channel_columns() const;
  // "sensor-axis" per channel, in column-list order.
  std::vector<std::string> sensor_names() const;
  std::size_t num_channels() const { return channel_columns().size(); }
  // Vocabulary classes only; the null class is appended by the Keep policy.
  std::size_t num_vocabulary_classes() const { return label_vocabulary.size(); }
  std::vector<std::string> class_names(NullPolicy policy) const;
  std::size_t num_classes(NullPolicy policy) const { return class_names(policy).size(); }
  NullPolicy default_null_policy() const;

  nlohmann::json to_json() const;
  static DatasetSchema from_json(const nlohmann::json& j);
  // Hash of the canonical JSON form.
  std::string hash() const;
};

DatasetSchema load_schema(const std::filesystem::path& path);

// Integral numeric tokens are canonicalised ("1.0" -> "1") so that label
// vocabularies match regardless of how a file prints its integers.
std::string canonical_label_token(const std::string& token);

const char* to_string(NullPolicy policy);
NullPolicy parse_null_policy(const std::string& text);

}  // namespace sahar::data
