// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sahar/data/schema.hpp"
#include "sahar/numerics/tensor.hpp"

namespace sahar::data {

// Sample label for the schema's null class before a NullPolicy is applied.
inline constexpr int kNullLabel = -1;

struct RawRecording {
  std::string subject_id;
  Tensor channels;          // [N x S]
  std::vector<int> labels;  // length N; class index or kNullLabel
  double sampling_rate_hz = 1.0;

  std::size_t num_samples() const { return labels.size(); }
  std::size_t num_channels() const { return channels.rank() == 2 ? channels.dim(1) : 0; }
};

// Rows [begin, end) of a recording.
RawRecording slice(const RawRecording& rec, std::size_t begin, std::size_t end);

// Parses delimited text. Channel columns are extracted in schema order; "NaN"
// tokens are kept as NaN for impute_missing. Labels outside the vocabulary go
// to the null class when the schema declares one and are an error otherwise.
RawRecording load_recording(const DatasetSchema& schema, std::istream& source, const std::string& source_name,
                            const std::string& subject_id);
RawRecording load_recording_file(const DatasetSchema& schema, const std::string& path, const std::string& subject_id);

// Linear interpolation between finite neighbours; edges take the nearest finite value.
RawRecording impute_missing(const RawRecording& rec);

// Keeps samples 0, k, 2k, ...
RawRecording downsample(const RawRecording& rec, std::size_t keep_every);

struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population std, floored at kMinStd

  static constexpr double kMinStd = 1e-8;
  bool operator==(const NormalizationStats&) const = default;
};

// Per-channel statistics pooled over several recordings (the training portion).
NormalizationStats compute_stats(std::span<const RawRecording> recordings);

// (x - mean) / std per channel. Without `stats`, they are computed from `rec`.
std::pair<RawRecording, NormalizationStats> normalize(const RawRecording& rec,
                                                      const std::optional<NormalizationStats>& stats = std::nullopt);

// Keep: null samples become class `null_class_index`. Drop: labels unchanged,
// null windows are discarded later by the windowing functions.
RawRecording apply_null_policy(const RawRecording& rec, NullPolicy policy, int null_class_index);

}  // namespace sahar::data
