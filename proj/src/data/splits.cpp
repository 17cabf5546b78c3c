// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/data/splits.hpp"

#include <algorithm>
#include <cmath>

#include "sahar/errors.hpp"

namespace sahar::data {

DataSplit split_by_time(const RawRecording& rec, double train_fraction, double val_fraction) {
  if (train_fraction < 0.0 || val_fraction < 0.0 || train_fraction + val_fraction > 1.0) {
    throw ConfigError("split fractions must be non-negative and sum to at most 1");
  }
  const std::size_t n = rec.num_samples();
  const auto a = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  const auto b = std::min(n, a + static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_fraction)));
  DataSplit out;
  if (a > 0) out.train.push_back(slice(rec, 0, a));
  if (b > a) out.val.push_back(slice(rec, a, b));
  if (n > b) out.test.push_back(slice(rec, b, n));
  return out;
}

std::vector<std::string> subject_ids(const std::vector<RawRecording>& recordings) {
  std::vector<std::string> ids;
  for (const auto& r : recordings) {
    if (std::find(ids.begin(), ids.end(), r.subject_id) == ids.end()) ids.push_back(r.subject_id);
  }
  return ids;
}

DataSplit split_benchmark(const std::vector<RawRecording>& recordings, const std::set<std::string>& test_subjects,
                          double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw ConfigError("val_fraction must lie in [0, 1)");
  const auto ids = subject_ids(recordings);
  for (const auto& t : test_subjects) {
    if (std::find(ids.begin(), ids.end(), t) == ids.end()) {
      throw ConfigError("unknown test subject '" + t + "'");
    }
  }
  DataSplit out;
  for (const auto& r : recordings) {
    if (test_subjects.count(r.subject_id)) {
      out.test.push_back(r);
      continue;
    }
    const std::size_t n = r.num_samples();
    const auto val_len = static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_fraction));
    if (val_len < n) out.train.push_back(slice(r, 0, n - val_len));
    if (val_len > 0) out.val.push_back(slice(r, n - val_len, n));
  }
  return out;
}

std::vector<LosoFold> loso_splits(const std::vector<RawRecording>& recordings) {
  const auto ids = subject_ids(recordings);
  if (ids.size() < 2) throw ProtocolError("leave-one-subject-out needs at least 2 subjects, found " +
                                          std::to_string(ids.size()));
  std::vector<LosoFold> folds;
  for (const auto& id : ids) {
    LosoFold f;
    f.held_out_subject = id;
    for (const auto& r : recordings) (r.subject_id == id ? f.test : f.train).push_back(r);
    folds.push_back(std::move(f));
  }
  return folds;
}

}  // namespace sahar::data
