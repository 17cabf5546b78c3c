// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/data/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "sahar/errors.hpp"
#include "sahar/io.hpp"

namespace sahar::data {

using nlohmann::json;

namespace {

const char* role_name(ColumnRole r) {
  switch (r) {
    case ColumnRole::Timestamp: return "timestamp";
    case ColumnRole::Label: return "label";
    case ColumnRole::Channel: return "channel";
    case ColumnRole::Ignore: return "ignore";
  }
  return "ignore";
}

ColumnRole parse_role(const std::string& s) {
  if (s == "timestamp") return ColumnRole::Timestamp;
  if (s == "label") return ColumnRole::Label;
  if (s == "channel") return ColumnRole::Channel;
  if (s == "ignore") return ColumnRole::Ignore;
  throw ConfigError("schema: unknown column role '" + s + "'");
}

}  // namespace

const char* to_string(NullPolicy policy) { return policy == NullPolicy::Keep ? "keep" : "drop"; }

NullPolicy parse_null_policy(const std::string& text) {
  if (text == "keep") return NullPolicy::Keep;
  if (text == "drop") return NullPolicy::Drop;
  throw ConfigError("null-class policy must be 'keep' or 'drop', got '" + text + "'");
}

std::string canonical_label_token(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec == std::errc() && res.ptr == last && std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  return token;
}

void DatasetSchema::validate() const {
  std::size_t labels = 0, channels = 0;
  std::set<std::size_t> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c.index).second) throw ConfigError("schema: column " + std::to_string(c.index) + " listed twice");
    if (c.role == ColumnRole::Label) ++labels;
    if (c.role == ColumnRole::Channel) {
      ++channels;
      if (c.sensor.empty()) throw ConfigError("schema: channel column " + std::to_string(c.index) + " has no sensor");
    }
  }
  if (labels != 1) throw ConfigError("schema: exactly one label column required, found " + std::to_string(labels));
  if (channels == 0) throw ConfigError("schema: at least one channel column required");
  if (!(sampling_rate_hz > 0.0)) throw ConfigError("schema: sampling_rate_hz must be positive");
  if (label_vocabulary.empty()) throw ConfigError("schema: empty label vocabulary");
  std::vector<bool> used(label_vocabulary.size(), false);
  std::set<std::string> raws;
  for (const auto& e : label_vocabulary) {
    if (e.class_index >= label_vocabulary.size() || used[e.class_index]) {
      throw ConfigError("schema: class indices must be dense 0..C-1 and unique");
    }
    used[e.class_index] = true;
    if (!raws.insert(e.raw).second) throw ConfigError("schema: label '" + e.raw + "' mapped twice");
  }
  if (null_class) {
    for (const auto& r : null_class->raw_values) {
      if (raws.count(r)) throw ConfigError("schema: label '" + r + "' is both a class and null");
    }
  }
}

std::size_t DatasetSchema::label_column() const {
  for (const auto& c : columns)
    if (c.role == ColumnRole::Label) return c.index;
  throw ConfigError("schema: no label column");
}

std::vector<std::size_t> DatasetSchema::channel_columns() const {
  std::vector<std::size_t> out;
  for (const auto& c : columns)
    if (c.role == ColumnRole::Channel) out.push_back(c.index);
  return out;
}

std::vector<std::string> DatasetSchema::sensor_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns) {
    if (c.role != ColumnRole::Channel) continue;
    out.push_back(c.axis.empty() ? c.sensor : c.sensor + "-" + c.axis);
  }
  return out;
}

std::vector<std::string> DatasetSchema::class_names(NullPolicy policy) const {
  std::vector<std::string> names(label_vocabulary.size());
  for (const auto& e : label_vocabulary) names[e.class_index] = e.name.empty() ? e.raw : e.name;
  if (null_class && policy == NullPolicy::Keep) names.push_back(null_class->name);
  return names;
}

NullPolicy DatasetSchema::default_null_policy() const {
  return null_class ? null_class->default_policy : NullPolicy::Drop;
}

json DatasetSchema::to_json() const {
  json cols = json::array();
  for (const auto& c : columns) {
    json jc{{"index", c.index}, {"role", role_name(c.role)}};
    if (c.role == ColumnRole::Channel) {
      jc["sensor"] = c.sensor;
      jc["axis"] = c.axis;
    }
    cols.push_back(jc);
  }
  json vocab = json::array();
  for (const auto& e : label_vocabulary) vocab.push_back({{"raw", e.raw}, {"class", e.class_index}, {"name", e.name}});
  json j{{"name", name},
         {"delimiter", std::string(1, delimiter)},
         {"header_lines", header_lines},
         {"sampling_rate_hz", sampling_rate_hz},
         {"columns", cols},
         {"label_vocabulary", vocab}};
  if (null_class) {
    j["null_class"] = {{"raw", null_class->raw_values},
                       {"name", null_class->name},
                       {"default_policy", to_string(null_class->default_policy)}};
  }
  return j;
}

DatasetSchema DatasetSchema::from_json(const json& j) {
  try {
    DatasetSchema s;
    s.name = j.value("name", "");
    const std::string delim = j.value("delimiter", ",");
    if (delim == "whitespace" || delim == " ") {
      s.delimiter = ' ';
    } else if (delim == "\\t" || delim == "\t") {
      s.delimiter = '\t';
    } else if (delim.size() == 1) {
      s.delimiter = delim[0];
    } else {
      throw ConfigError("schema: delimiter must be a single character, got '" + delim + "'");
    }
    s.header_lines = j.value("header_lines", std::size_t{0});
    s.sampling_rate_hz = j.at("sampling_rate_hz").get<double>();
    for (const auto& jc : j.at("columns")) {
      ColumnSpec c;
      c.index = jc.at("index").get<std::size_t>();
      c.role = parse_role(jc.at("role").get<std::string>());
      if (c.role == ColumnRole::Channel) {
        c.sensor = jc.at("sensor").get<std::string>();
        c.axis = jc.value("axis", "");
      }
      s.columns.push_back(c);
    }
    for (const auto& je : j.at("label_vocabulary")) {
      LabelEntry e;
      const auto& raw = je.at("raw");
      e.raw = canonical_label_token(raw.is_string() ? raw.get<std::string>() : raw.dump());
      e.class_index = je.at("class").get<std::size_t>();
      e.name = je.value("name", "");
      s.label_vocabulary.push_back(e);
    }
    if (j.contains("null_class") && !j["null_class"].is_null()) {
      const auto& jn = j["null_class"];
      NullClass n;
      if (jn.contains("raw")) {
        for (const auto& r : jn["raw"]) n.raw_values.push_back(canonical_label_token(r.is_string() ? r.get<std::string>() : r.dump()));
      }
      n.name = jn.value("name", "null");
      n.default_policy = parse_null_policy(jn.value("default_policy", "drop"));
      s.null_class = n;
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
}

std::string DatasetSchema::hash() const { return hash_hex(to_json().dump()); }

DatasetSchema load_schema(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("schema " + path.string() + ": " + e.what());
  }
  return DatasetSchema::from_json(j);
}

}  // namespace sahar::data
