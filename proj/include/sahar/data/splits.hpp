// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "sahar/data/recording.hpp"

namespace sahar::data {

struct DataSplit {
  std::vector<RawRecording> train;
  std::vector<RawRecording> val;
  std::vector<RawRecording> test;
};

// Splits one recording by contiguous time into [0, a), [a, b), [b, N) with
// a = floor(N * train_fraction), b = a + floor(N * val_fraction). Empty parts are omitted.
DataSplit split_by_time(const RawRecording& rec, double train_fraction, double val_fraction);

// Test = every recording of the listed subjects. Each remaining recording gives
// its final `val_fraction` (contiguous) to validation and the rest to training.
DataSplit split_benchmark(const std::vector<RawRecording>& recordings, const std::set<std::string>& test_subjects,
                          double val_fraction);

// First-appearance order of subject ids.
std::vector<std::string> subject_ids(const std::vector<RawRecording>& recordings);

struct LosoFold {
  std::string held_out_subject;
  std::vector<RawRecording> train;  // all other subjects
  std::vector<RawRecording> test;   // the held-out subject
};

// One fold per subject, in first-appearance order.
std::vector<LosoFold> loso_splits(const std::vector<RawRecording>& recordings);

}  // namespace sahar::data
