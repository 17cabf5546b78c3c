// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The two test protocols. Both take any window -> class predictor so they can
// be checked against constant or oracle predictors as well as trained models.
// Samples or windows whose ground truth is the dropped null label are not scored.

#include <functional>
#include <vector>

#include "sahar/data/recording.hpp"
#include "sahar/evaluation/metrics.hpp"

namespace sahar::evaluation {

// Must be safe to call concurrently.
using WindowPredictor = std::function<std::size_t(const Tensor& window)>;

struct SampleWiseResult {
  ConfusionMatrix confusion;
  std::vector<int> predictions;  // per sample; -1 for the first T - 1 samples
  std::size_t scored = 0;
};

// Stride-1 windows; each prediction belongs to the window's last sample.
SampleWiseResult evaluate_sample_wise(const WindowPredictor& predict, const data::RawRecording& rec,
                                      std::size_t window_length, std::size_t num_classes, std::size_t threads = 1);

// Label-boundary windows with repeat padding, one prediction per window.
ConfusionMatrix evaluate_window_wise(const WindowPredictor& predict, const data::RawRecording& rec,
                                     std::size_t window_length, std::size_t num_classes, std::size_t threads = 1);

// Confusion summed over several recordings; macro_f1 is NaN when nothing was scored.
struct ProtocolScores {
  ConfusionMatrix confusion;
  double macro_f1 = 0.0;
  std::size_t scored = 0;
};

ProtocolScores score_sample_wise(const WindowPredictor& predict, const std::vector<data::RawRecording>& recs,
                                 std::size_t window_length, std::size_t num_classes, std::size_t threads = 1);
ProtocolScores score_window_wise(const WindowPredictor& predict, const std::vector<data::RawRecording>& recs,
                                 std::size_t window_length, std::size_t num_classes, std::size_t threads = 1);

// Rows [start, start + T) of a recording.
Tensor window_at(const data::RawRecording& rec, std::size_t start, std::size_t window_length);

}  // namespace sahar::evaluation
