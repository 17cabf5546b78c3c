// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/evaluation/protocols.hpp"

#include <algorithm>
#include <limits>

#include "sahar/data/windows.hpp"
#include "sahar/errors.hpp"
#include "sahar/parallel.hpp"

namespace sahar::evaluation {

namespace {

void require_length(const data::RawRecording& rec, std::size_t t) {
  if (t == 0) throw ConfigError("window length must be >= 1");
  if (rec.num_samples() < t) {
    throw DataError("recording of subject '" + rec.subject_id + "' has " + std::to_string(rec.num_samples()) +
                    " samples, shorter than the window length " + std::to_string(t));
  }
}

std::size_t checked(std::size_t label, std::size_t num_classes) {
  if (label >= num_classes) throw DataError("predictor returned class " + std::to_string(label));
  return label;
}

}  // namespace

Tensor window_at(const data::RawRecording& rec, std::size_t start, std::size_t window_length) {
  const std::size_t s = rec.num_channels();
  const auto first = rec.channels.values().begin() + static_cast<std::ptrdiff_t>(start * s);
  return Tensor({window_length, s}, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(window_length * s)));
}

SampleWiseResult evaluate_sample_wise(const WindowPredictor& predict, const data::RawRecording& rec,
                                      std::size_t window_length, std::size_t num_classes, std::size_t threads) {
  require_length(rec, window_length);
  const std::size_t n = rec.num_samples(), count = n - window_length + 1;
  SampleWiseResult out;
  out.predictions.assign(n, -1);
  parallel_for(count, threads, [&](std::size_t w) {
    const std::size_t last = w + window_length - 1;
    if (rec.labels[last] == data::kNullLabel) return;
    out.predictions[last] = static_cast<int>(checked(predict(window_at(rec, w, window_length)), num_classes));
  });
  out.confusion = ConfusionMatrix(num_classes);
  for (std::size_t i = window_length - 1; i < n; ++i) {
    if (rec.labels[i] == data::kNullLabel) continue;
    out.confusion.add(static_cast<std::size_t>(rec.labels[i]), static_cast<std::size_t>(out.predictions[i]));
    ++out.scored;
  }
  return out;
}

ConfusionMatrix evaluate_window_wise(const WindowPredictor& predict, const data::RawRecording& rec,
                                     std::size_t window_length, std::size_t num_classes, std::size_t threads) {
  require_length(rec, window_length);
  const auto ds = data::make_boundary_padded_windows(rec, window_length);
  std::vector<std::size_t> pred(ds.size());
  parallel_for(ds.size(), threads, [&](std::size_t i) { pred[i] = checked(predict(ds.windows[i]), num_classes); });
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) cm.add(static_cast<std::size_t>(ds.labels[i]), pred[i]);
  return cm;
}

namespace {

template <class Scorer>
ProtocolScores score_all(const std::vector<data::RawRecording>& recs, std::size_t num_classes, Scorer&& scorer) {
  ProtocolScores out;
  out.confusion = ConfusionMatrix(num_classes);
  for (const auto& r : recs) out.confusion += scorer(r);
  out.scored = out.confusion.total();
  out.macro_f1 = out.scored > 0 ? macro_f1(out.confusion) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace

ProtocolScores score_sample_wise(const WindowPredictor& predict, const std::vector<data::RawRecording>& recs,
                                 std::size_t window_length, std::size_t num_classes, std::size_t threads) {
  return score_all(recs, num_classes, [&](const data::RawRecording& r) {
    return evaluate_sample_wise(predict, r, window_length, num_classes, threads).confusion;
  });
}

ProtocolScores score_window_wise(const WindowPredictor& predict, const std::vector<data::RawRecording>& recs,
                                 std::size_t window_length, std::size_t num_classes, std::size_t threads) {
  return score_all(recs, num_classes, [&](const data::RawRecording& r) {
    return evaluate_window_wise(predict, r, window_length, num_classes, threads);
  });
}

}  // namespace sahar::evaluation
