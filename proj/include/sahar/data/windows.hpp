// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sahar/data/recording.hpp"

namespace sahar::data {

enum class WindowLabeling { Majority, LastSample };

struct WindowSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive; end - start < T for repeat-padded windows
  bool operator==(const WindowSpan&) const = default;
};

// Fixed-length labelled windows. Each window is a [T x S] tensor.
struct WindowedDataset {
  std::size_t window_length = 0;
  std::size_t num_channels = 0;
  std::vector<Tensor> windows;
  std::vector<int> labels;
  std::vector<WindowSpan> window_spans;
  std::optional<NormalizationStats> normalization_stats;

  std::size_t size() const { return windows.size(); }
  bool empty() const { return windows.empty(); }
  void append(const WindowedDataset& other);
};

// round(T * (1 - overlap)); ConfigError when it is < 1 or overlap is outside [0, 1).
std::size_t window_stride(std::size_t window_length, double overlap_fraction);

// Number of windows start = 0, s, 2s, ... with start + T <= N.
std::size_t window_count(std::size_t num_samples, std::size_t window_length, std::size_t stride);

// Majority vote; ties go to the tied label whose last occurrence is latest,
// which is the final sample's label whenever that label is among the tied.
int majority_label(std::span<const int> labels);

// Sliding windows. Windows whose label is kNullLabel are dropped unless `keep_null`.
WindowedDataset make_windows(const RawRecording& rec, std::size_t window_length, double overlap_fraction,
                             WindowLabeling labeling, bool keep_null = false);

// Same, with an explicit stride (sample-wise protocol uses stride 1).
WindowedDataset make_windows_with_stride(const RawRecording& rec, std::size_t window_length, std::size_t stride,
                                         WindowLabeling labeling, bool keep_null = false);

// Non-overlapping windows cut at label changes. A short tail segment of length
// L < T is extended by repeating its last sample T - L times; the next window
// starts exactly at the label change.
WindowedDataset make_boundary_padded_windows(const RawRecording& rec, std::size_t window_length,
                                             bool keep_null = false);

}  // namespace sahar::data
