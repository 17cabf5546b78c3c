// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/data/recording.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <unordered_map>

#include "sahar/errors.hpp"

namespace sahar::data {

namespace {

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  if (delimiter == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
    return fields;
  }
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    std::string_view f = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    fields.push_back(f);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

}  // namespace

RawRecording slice(const RawRecording& rec, std::size_t begin, std::size_t end) {
  if (begin >= end || end > rec.num_samples()) {
    throw DataError("slice [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside recording of " +
                    std::to_string(rec.num_samples()) + " samples");
  }
  const std::size_t s = rec.num_channels();
  RawRecording out;
  out.subject_id = rec.subject_id;
  out.sampling_rate_hz = rec.sampling_rate_hz;
  out.labels.assign(rec.labels.begin() + static_cast<std::ptrdiff_t>(begin),
                    rec.labels.begin() + static_cast<std::ptrdiff_t>(end));
  auto src = rec.channels.data();
  out.channels = Tensor({end - begin, s}, std::vector<double>(src.begin() + static_cast<std::ptrdiff_t>(begin * s),
                                                              src.begin() + static_cast<std::ptrdiff_t>(end * s)));
  return out;
}

RawRecording load_recording(const DatasetSchema& schema, std::istream& source, const std::string& source_name,
                            const std::string& subject_id) {
  schema.validate();
  const auto channel_cols = schema.channel_columns();
  const auto label_col = schema.label_column();
  std::size_t needed = label_col;
  for (auto c : channel_cols) needed = std::max(needed, c);
  ++needed;

  std::unordered_map<std::string, int> vocab;
  for (const auto& e : schema.label_vocabulary) vocab.emplace(e.raw, static_cast<int>(e.class_index));
  if (schema.null_class) {
    for (const auto& r : schema.null_class->raw_values) vocab.emplace(r, kNullLabel);
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line_no <= schema.header_lines) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_line(line, schema.delimiter);
    if (fields.size() < needed) {
      throw ParseError(source_name, line_no,
                       "expected at least " + std::to_string(needed) + " fields, found " + std::to_string(fields.size()));
    }
    const std::string token = canonical_label_token(std::string(fields[label_col]));
    auto it = vocab.find(token);
    int label;
    if (it != vocab.end()) {
      label = it->second;
    } else if (schema.null_class) {
      label = kNullLabel;
    } else {
      throw VocabularyError(source_name + ":" + std::to_string(line_no) + ": label '" + token +
                            "' is not in the vocabulary and the schema declares no null class");
    }
    for (auto c : channel_cols) {
      double v;
      if (!parse_double(fields[c], v)) {
        throw ParseError(source_name, line_no,
                         "column " + std::to_string(c) + " is not numeric: '" + std::string(fields[c]) + "'");
      }
      values.push_back(v);
    }
    labels.push_back(label);
  }
  if (source.bad()) throw IoError("read failure on " + source_name);
  if (labels.empty()) throw DataError(source_name + ": no data rows");

  RawRecording rec;
  rec.subject_id = subject_id;
  rec.sampling_rate_hz = schema.sampling_rate_hz;
  rec.channels = Tensor({labels.size(), channel_cols.size()}, std::move(values));
  rec.labels = std::move(labels);
  return rec;
}

RawRecording load_recording_file(const DatasetSchema& schema, const std::string& path, const std::string& subject_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file " + path);
  return load_recording(schema, in, path, subject_id);
}

RawRecording impute_missing(const RawRecording& rec) {
  RawRecording out = rec;
  const std::size_t n = rec.num_samples(), s = rec.num_channels();
  for (std::size_t c = 0; c < s; ++c) {
    std::size_t prev = n;  // index of the last finite value seen
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(rec.channels.at(i, c))) continue;
      if (prev == n) {
        for (std::size_t k = 0; k < i; ++k) out.channels.at(k, c) = rec.channels.at(i, c);
      } else if (i > prev + 1) {
        const double a = rec.channels.at(prev, c), b = rec.channels.at(i, c);
        const double span = static_cast<double>(i - prev);
        for (std::size_t k = prev + 1; k < i; ++k) {
          out.channels.at(k, c) = a + (b - a) * static_cast<double>(k - prev) / span;
        }
      }
      prev = i;
    }
    if (prev == n) throw DataError("subject " + rec.subject_id + ": channel " + std::to_string(c) + " has no finite values");
    for (std::size_t k = prev + 1; k < n; ++k) out.channels.at(k, c) = rec.channels.at(prev, c);
  }
  return out;
}

RawRecording downsample(const RawRecording& rec, std::size_t keep_every) {
  if (keep_every == 0) throw ConfigError("downsample: keep_every must be >= 1");
  if (keep_every == 1) return rec;
  const std::size_t n = rec.num_samples(), s = rec.num_channels();
  const std::size_t m = (n + keep_every - 1) / keep_every;
  RawRecording out;
  out.subject_id = rec.subject_id;
  out.sampling_rate_hz = rec.sampling_rate_hz / static_cast<double>(keep_every);
  out.channels = Tensor({m, s});
  out.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t src = i * keep_every;
    out.labels[i] = rec.labels[src];
    for (std::size_t c = 0; c < s; ++c) out.channels.at(i, c) = rec.channels.at(src, c);
  }
  return out;
}

NormalizationStats compute_stats(std::span<const RawRecording> recordings) {
  if (recordings.empty()) throw DataError("normalization statistics need at least one recording");
  const std::size_t s = recordings.front().num_channels();
  NormalizationStats st;
  st.mean.assign(s, 0.0);
  st.stddev.assign(s, 0.0);
  std::size_t total = 0;
  for (const auto& r : recordings) {
    if (r.num_channels() != s) throw DimensionError("recordings disagree on channel count");
    for (std::size_t i = 0; i < r.num_samples(); ++i)
      for (std::size_t c = 0; c < s; ++c) st.mean[c] += r.channels.at(i, c);
    total += r.num_samples();
  }
  for (auto& m : st.mean) m /= static_cast<double>(total);
  for (const auto& r : recordings) {
    for (std::size_t i = 0; i < r.num_samples(); ++i)
      for (std::size_t c = 0; c < s; ++c) {
        const double d = r.channels.at(i, c) - st.mean[c];
        st.stddev[c] += d * d;
      }
  }
  for (auto& v : st.stddev) v = std::max(std::sqrt(v / static_cast<double>(total)), NormalizationStats::kMinStd);
  return st;
}

std::pair<RawRecording, NormalizationStats> normalize(const RawRecording& rec,
                                                      const std::optional<NormalizationStats>& stats) {
  NormalizationStats st = stats ? *stats : compute_stats(std::span<const RawRecording>(&rec, 1));
  const std::size_t s = rec.num_channels();
  if (st.mean.size() != s || st.stddev.size() != s) {
    throw DimensionError("normalize: statistics cover " + std::to_string(st.mean.size()) + " channels, recording has " +
                         std::to_string(s));
  }
  RawRecording out = rec;
  for (std::size_t i = 0; i < rec.num_samples(); ++i)
    for (std::size_t c = 0; c < s; ++c) {
      const double sd = std::max(st.stddev[c], NormalizationStats::kMinStd);
      out.channels.at(i, c) = (rec.channels.at(i, c) - st.mean[c]) / sd;
    }
  return {std::move(out), std::move(st)};
}

RawRecording apply_null_policy(const RawRecording& rec, NullPolicy policy, int null_class_index) {
  if (policy == NullPolicy::Drop) return rec;
  RawRecording out = rec;
  for (auto& l : out.labels)
    if (l == kNullLabel) l = null_class_index;
  return out;
}

}  // namespace sahar::data
