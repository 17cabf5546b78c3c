// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/evaluation/metrics.hpp"

#include "sahar/errors.hpp"

namespace sahar::evaluation {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes) : n_(num_classes), counts_(num_classes * num_classes, 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= n_ || predicted >= n_) {
    throw DataError("confusion matrix entry (" + std::to_string(truth) + ", " + std::to_string(predicted) +
                    ") outside " + std::to_string(n_) + " classes");
  }
  counts_[truth * n_ + predicted] += count;
  total_ += count;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw DimensionError("confusion matrices have different class counts");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
  return *this;
}

std::uint64_t ConfusionMatrix::true_count(std::size_t c) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(c, p);
  return s;
}

std::uint64_t ConfusionMatrix::predicted_count(std::size_t c) const {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) s += at(t, c);
  return s;
}

nlohmann::json ConfusionMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < n_; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < n_; ++p) row.push_back(at(t, p));
    rows.push_back(row);
  }
  return rows;
}

ConfusionMatrix confusion_from_json(const nlohmann::json& rows) {
  if (!rows.is_array()) throw DataError("confusion matrix must be an array of rows");
  ConfusionMatrix cm(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& row = rows[t];
    if (!row.is_array() || row.size() != rows.size()) throw DataError("confusion matrix must be square");
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (!row[p].is_number_unsigned() && !(row[p].is_number_integer() && row[p].get<std::int64_t>() >= 0)) {
        throw DataError("confusion matrix entries must be nonnegative integers");
      }
      cm.add(t, p, row[p].get<std::uint64_t>());
    }
  }
  return cm;
}

std::vector<ClassScores> per_class_scores(const ConfusionMatrix& cm) {
  std::vector<ClassScores> out(cm.num_classes());
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    const auto tp = static_cast<double>(cm.at(c, c));
    const auto truth = cm.true_count(c), pred = cm.predicted_count(c);
    auto& s = out[c];
    s.support = truth;
    s.present = truth > 0 || pred > 0;
    s.precision = pred > 0 ? tp / static_cast<double>(pred) : 0.0;
    s.recall = truth > 0 ? tp / static_cast<double>(truth) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  }
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.num_classes() == 0 || cm.total() == 0) throw DataError("macro F1 of an empty confusion matrix");
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : per_class_scores(cm)) {
    if (!s.present) continue;
    sum += s.f1;
    ++n;
  }
  return sum / static_cast<double>(n);
}

ConfusionMatrix confusion_from_labels(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                      std::size_t num_classes) {
  if (truth.size() != predicted.size()) throw DimensionError("truth and prediction lists differ in length");
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

}  // namespace sahar::evaluation
