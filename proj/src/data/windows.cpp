// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/data/windows.hpp"

#include <cmath>
#include <map>

#include "sahar/errors.hpp"

namespace sahar::data {

namespace {

Tensor copy_rows(const RawRecording& rec, std::size_t start, std::size_t end, std::size_t length) {
  const std::size_t s = rec.num_channels();
  Tensor w({length, s});
  for (std::size_t r = 0; r < length; ++r) {
    const std::size_t src = std::min(start + r, end - 1);
    for (std::size_t c = 0; c < s; ++c) w.at(r, c) = rec.channels.at(src, c);
  }
  return w;
}

void check_window_length(const RawRecording& rec, std::size_t window_length) {
  if (window_length == 0) throw ConfigError("window length must be >= 1");
  if (window_length > rec.num_samples()) {
    throw DataError("window length " + std::to_string(window_length) + " exceeds recording of " +
                    std::to_string(rec.num_samples()) + " samples (subject " + rec.subject_id + ")");
  }
}

}  // namespace

void WindowedDataset::append(const WindowedDataset& other) {
  if (other.empty()) return;
  if (empty() && window_length == 0) {
    window_length = other.window_length;
    num_channels = other.num_channels;
  }
  if (other.window_length != window_length || other.num_channels != num_channels) {
    throw DimensionError("cannot append windows of a different shape");
  }
  windows.insert(windows.end(), other.windows.begin(), other.windows.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  window_spans.insert(window_spans.end(), other.window_spans.begin(), other.window_spans.end());
}

std::size_t window_stride(std::size_t window_length, double overlap_fraction) {
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ConfigError("window overlap must lie in [0, 1)");
  }
  const double stride = std::round(static_cast<double>(window_length) * (1.0 - overlap_fraction));
  if (stride < 1.0) throw ConfigError("window stride rounds to zero; lower the overlap or lengthen the window");
  return static_cast<std::size_t>(stride);
}

std::size_t window_count(std::size_t num_samples, std::size_t window_length, std::size_t stride) {
  if (window_length > num_samples) return 0;
  return (num_samples - window_length) / stride + 1;
}

int majority_label(std::span<const int> labels) {
  if (labels.empty()) throw DataError("majority vote over zero samples");
  std::map<int, std::pair<std::size_t, std::size_t>> tally;  // label -> (count, last position)
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& t = tally[labels[i]];
    ++t.first;
    t.second = i;
  }
  int best = labels.back();
  std::pair<std::size_t, std::size_t> best_key{0, 0};
  for (const auto& [label, t] : tally) {
    if (t > best_key) {
      best_key = t;
      best = label;
    }
  }
  return best;
}

WindowedDataset make_windows_with_stride(const RawRecording& rec, std::size_t window_length, std::size_t stride,
                                         WindowLabeling labeling, bool keep_null) {
  check_window_length(rec, window_length);
  if (stride == 0) throw ConfigError("window stride must be >= 1");
  WindowedDataset ds;
  ds.window_length = window_length;
  ds.num_channels = rec.num_channels();
  const std::size_t count = window_count(rec.num_samples(), window_length, stride);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = k * stride, end = start + window_length;
    std::span<const int> labels(rec.labels.data() + start, window_length);
    const int label = labeling == WindowLabeling::Majority ? majority_label(labels) : labels.back();
    if (label == kNullLabel && !keep_null) continue;
    ds.windows.push_back(copy_rows(rec, start, end, window_length));
    ds.labels.push_back(label);
    ds.window_spans.push_back({start, end});
  }
  return ds;
}

WindowedDataset make_windows(const RawRecording& rec, std::size_t window_length, double overlap_fraction,
                             WindowLabeling labeling, bool keep_null) {
  return make_windows_with_stride(rec, window_length, window_stride(window_length, overlap_fraction), labeling,
                                  keep_null);
}

WindowedDataset make_boundary_padded_windows(const RawRecording& rec, std::size_t window_length, bool keep_null) {
  if (window_length == 0) throw ConfigError("window length must be >= 1");
  WindowedDataset ds;
  ds.window_length = window_length;
  ds.num_channels = rec.num_channels();
  const std::size_t n = rec.num_samples();
  std::size_t seg_start = 0;
  while (seg_start < n) {
    std::size_t seg_end = seg_start + 1;
    while (seg_end < n && rec.labels[seg_end] == rec.labels[seg_start]) ++seg_end;
    const int label = rec.labels[seg_start];
    for (std::size_t start = seg_start; start < seg_end; start += window_length) {
      const std::size_t end = std::min(start + window_length, seg_end);
      if (label == kNullLabel && !keep_null) continue;
      ds.windows.push_back(copy_rows(rec, start, end, window_length));
      ds.labels.push_back(label);
      ds.window_spans.push_back({start, end});
    }
    seg_start = seg_end;
  }
  return ds;
}

}  // namespace sahar::data
