// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace sahar::evaluation {

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t num_classes);

  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  std::size_t num_classes() const noexcept { return n_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t true_count(std::size_t c) const;
  std::uint64_t predicted_count(std::size_t c) const;

  nlohmann::json to_json() const;
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // true instances
  bool present = false;       // true or predicted at least once
};

// Zero-denominator precision/recall are 0; F1 is 0 when P + R = 0.
std::vector<ClassScores> per_class_scores(const ConfusionMatrix& cm);

// Mean F1 over present classes. DataError when nothing was evaluated.
double macro_f1(const ConfusionMatrix& cm);

// Inverse of ConfusionMatrix::to_json (square array of rows). DataError when malformed.
ConfusionMatrix confusion_from_json(const nlohmann::json& rows);

ConfusionMatrix confusion_from_labels(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                      std::size_t num_classes);

}  // namespace sahar::evaluation
