// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sahar/evaluation/protocols.hpp"

namespace sahar::evaluation {

struct ReportEntry {
  std::string name;  // dataset split or held-out subject
  std::optional<ProtocolScores> sample_wise;
  std::optional<ProtocolScores> window_wise;
};

struct EvalReport {
  std::vector<std::string> class_names;
  std::vector<ReportEntry> entries;
  // Unweighted means over entries (LOSO).
  std::optional<double> mean_sample_wise;
  std::optional<double> mean_window_wise;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  // One row per entry with <sample-wise, window-wise> macro F1, then per-class tables.
  std::string to_table() const;
};

std::string protocol_name(bool sample_wise);

}  // namespace sahar::evaluation
