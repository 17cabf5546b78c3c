// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/app/experiment_config.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "sahar/data/windows.hpp"
#include "sahar/errors.hpp"
#include "sahar/io.hpp"

namespace sahar::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Model fields that come from the data rather than the file.
const std::set<std::string> kDerivedModelFields{"window_length", "num_channels", "num_classes"};

json model_section(const model::ModelConfig& m) {
  json j = m.to_json();
  for (const auto& k : kDerivedModelFields) j.erase(k);
  return j;
}

json train_section(const training::TrainRunConfig& t, bool log_wall_time) {
  return {{"batch_size", t.batch_size},
          {"max_epochs", t.max_epochs},
          {"patience", t.patience},
          {"seed", t.seed},
          {"mode", training::to_string(t.mode)},
          {"class_weighting", t.class_weighting},
          {"learning_rate", t.adam.learning_rate},
          {"beta1", t.adam.beta1},
          {"beta2", t.adam.beta2},
          {"eps", t.adam.eps},
          {"clip_norm", t.clip_norm},
          {"threads", t.threads},
          {"log_wall_time", log_wall_time}};
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

// Calls `f(key, value)` for every key, rejecting keys outside `allowed`.
template <typename F>
void each_field(const json& j, const std::string& where, const std::set<std::string>& allowed, F&& f) {
  require_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string path = where.empty() ? it.key() : where + "." + it.key();
    if (!allowed.count(it.key())) throw ConfigError("unknown config field '" + path + "'");
    try {
      f(it.key(), it.value());
    } catch (const json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute()) return p;
  return (base / p).lexically_normal();
}

RecordingSource parse_source(const json& v, const fs::path& base) {
  RecordingSource s;
  if (v.is_string()) {
    s.path = resolve(v.get<std::string>(), base);
    s.subject = subject_from_path(s.path);
    return s;
  }
  each_field(v, "data.recordings[]", {"subject", "path"}, [&](const std::string& k, const json& x) {
    if (k == "subject") s.subject = x.get<std::string>();
    if (k == "path") s.path = resolve(x.get<std::string>(), base);
  });
  if (s.path.empty()) throw ConfigError("data.recordings[] entry needs a path");
  if (s.subject.empty()) s.subject = subject_from_path(s.path);
  return s;
}

}  // namespace

const char* to_string(SplitMode mode) { return mode == SplitMode::Subjects ? "subjects" : "fraction"; }

std::string subject_from_path(const fs::path& path) {
  const std::string stem = path.stem().string();
  std::size_t i = stem.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(stem[i - 1]))) --i;
  return i < stem.size() ? stem.substr(i) : stem;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(!schema.empty(), "schema: a schema file is required");
  need(!recordings.empty(), "data.recordings: at least one recording is required");
  need(keep_every >= 1, "preprocess.keep_every must be >= 1");
  need(window_length >= 1, "window.length must be >= 1");
  data::window_stride(window_length, overlap);
  need(val_fraction >= 0.0 && val_fraction < 1.0, "split.val_fraction must lie in [0, 1)");
  if (split_mode == SplitMode::Fraction) {
    need(train_fraction > 0.0 && train_fraction <= 1.0, "split.train_fraction must lie in (0, 1]");
    need(train_fraction + val_fraction <= 1.0, "split.train_fraction + split.val_fraction must be <= 1");
  } else {
    std::set<std::string> known;
    for (const auto& r : recordings) known.insert(r.subject);
    for (const auto& s : test_subjects) need(known.count(s) > 0, "split.test_subjects: no recording for subject '" + s + "'");
  }
  need(!output.empty(), "output must not be empty");
  model::ModelConfig m = model;
  m.window_length = window_length;
  m.num_channels = std::max<std::size_t>(m.num_channels, 1);
  m.num_classes = std::max<std::size_t>(m.num_classes, 1);
  m.validate();
  train.validate();
}

fs::path ExperimentConfig::effective_cache_dir() const {
  return cache_dir.empty() ? output / "cache" : cache_dir;
}

json ExperimentConfig::to_json() const {
  json recs = json::array();
  for (const auto& r : recordings) recs.push_back({{"subject", r.subject}, {"path", r.path.string()}});
  return {{"schema", schema.string()},
          {"data", {{"recordings", recs}, {"cache_dir", cache_dir.string()}}},
          {"preprocess",
           {{"keep_every", keep_every},
            {"impute", impute},
            {"normalize", normalize},
            {"null_policy", null_policy ? data::to_string(*null_policy) : "default"}}},
          {"window", {{"length", window_length}, {"overlap", overlap}}},
          {"split",
           {{"mode", to_string(split_mode)},
            {"test_subjects", test_subjects},
            {"val_fraction", val_fraction},
            {"train_fraction", train_fraction}}},
          {"model", model_section(model)},
          {"train", train_section(train, log_wall_time)},
          {"output", output.string()}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  each_field(j, "", {"schema", "data", "preprocess", "window", "split", "model", "train", "output"},
             [&](const std::string& k, const json& v) {
               if (k == "schema") {
                 c.schema = v.is_null() ? fs::path() : resolve(v.get<std::string>(), base_dir);
               } else if (k == "data") {
                 each_field(v, "data", {"recordings", "cache_dir"}, [&](const std::string& dk, const json& dv) {
                   if (dk == "recordings") {
                     if (!dv.is_array()) throw ConfigError("data.recordings must be an array");
                     for (const auto& e : dv) c.recordings.push_back(parse_source(e, base_dir));
                   } else {
                     c.cache_dir = resolve(dv.get<std::string>(), base_dir);
                   }
                 });
               } else if (k == "preprocess") {
                 each_field(v, "preprocess", {"keep_every", "impute", "normalize", "null_policy"},
                            [&](const std::string& pk, const json& pv) {
                              if (pk == "keep_every") c.keep_every = pv.get<std::size_t>();
                              if (pk == "impute") c.impute = pv.get<bool>();
                              if (pk == "normalize") c.normalize = pv.get<bool>();
                              if (pk == "null_policy") {
                                const auto s = pv.get<std::string>();
                                if (s == "default") {
                                  c.null_policy.reset();
                                } else {
                                  c.null_policy = data::parse_null_policy(s);
                                }
                              }
                            });
               } else if (k == "window") {
                 each_field(v, "window", {"length", "overlap"}, [&](const std::string& wk, const json& wv) {
                   if (wk == "length") c.window_length = wv.get<std::size_t>();
                   if (wk == "overlap") c.overlap = wv.get<double>();
                 });
               } else if (k == "split") {
                 each_field(v, "split", {"mode", "test_subjects", "val_fraction", "train_fraction"},
                            [&](const std::string& sk, const json& sv) {
                              if (sk == "mode") {
                                const auto m = sv.get<std::string>();
                                if (m == "subjects") {
                                  c.split_mode = SplitMode::Subjects;
                                } else if (m == "fraction") {
                                  c.split_mode = SplitMode::Fraction;
                                } else {
                                  throw ConfigError("split.mode must be 'subjects' or 'fraction', got '" + m + "'");
                                }
                              }
                              if (sk == "test_subjects") {
                                c.test_subjects.clear();
                                for (const auto& s : sv) {
                                  c.test_subjects.push_back(s.is_string() ? s.get<std::string>() : s.dump());
                                }
                              }
                              if (sk == "val_fraction") c.val_fraction = sv.get<double>();
                              if (sk == "train_fraction") c.train_fraction = sv.get<double>();
                            });
               } else if (k == "model") {
                 require_object(v, "model");
                 for (const auto& d : kDerivedModelFields) {
                   if (v.contains(d)) {
                     throw ConfigError("model." + d + " is derived from the data" +
                                       (d == "window_length" ? std::string("; set window.length instead") : ""));
                   }
                 }
                 c.model.apply_json(v);
               } else if (k == "train") {
                 auto& t = c.train;
                 each_field(v, "train",
                            {"batch_size", "max_epochs", "patience", "seed", "mode", "class_weighting",
                             "learning_rate", "beta1", "beta2", "eps", "clip_norm", "threads", "log_wall_time"},
                            [&](const std::string& tk, const json& tv) {
                              if (tk == "batch_size") t.batch_size = tv.get<std::size_t>();
                              if (tk == "max_epochs") t.max_epochs = tv.get<std::size_t>();
                              if (tk == "patience") t.patience = tv.get<std::size_t>();
                              if (tk == "seed") t.seed = tv.get<std::uint64_t>();
                              if (tk == "mode") t.mode = training::parse_train_mode(tv.get<std::string>());
                              if (tk == "class_weighting") t.class_weighting = tv.get<bool>();
                              if (tk == "learning_rate") t.adam.learning_rate = tv.get<double>();
                              if (tk == "beta1") t.adam.beta1 = tv.get<double>();
                              if (tk == "beta2") t.adam.beta2 = tv.get<double>();
                              if (tk == "eps") t.adam.eps = tv.get<double>();
                              if (tk == "clip_norm") t.clip_norm = tv.get<double>();
                              if (tk == "threads") t.threads = tv.get<std::size_t>();
                              if (tk == "log_wall_time") c.log_wall_time = tv.get<bool>();
                            });
               } else if (k == "output") {
                 c.output = resolve(v.get<std::string>(), base_dir);
               }
             });
  return c;
}

json default_config_json() {
  ExperimentConfig c;
  json j = c.to_json();
  j["schema"] = nullptr;
  return j;
}

void merge_json(json& into, const json& from) {
  if (into.is_object() && from.is_object()) {
    for (auto it = from.begin(); it != from.end(); ++it) {
      if (into.contains(it.key())) {
        merge_json(into[it.key()], it.value());
      } else {
        into[it.key()] = it.value();
      }
    }
    return;
  }
  into = from;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty path segment");
    if (!node->is_object()) throw ConfigError("override '" + path + "': '" + key + "' is not inside an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig load_experiment_config(const std::optional<fs::path>& file, const std::vector<std::string>& overrides) {
  json doc = default_config_json();
  fs::path base = fs::current_path();
  if (file) {
    const json from = json::parse(read_file(*file), nullptr, false);
    if (from.is_discarded()) throw ConfigError(file->string() + ": not valid JSON");
    if (!from.is_object()) throw ConfigError(file->string() + ": top level must be an object");
    merge_json(doc, from);
    base = fs::absolute(*file).parent_path();
  }
  for (const auto& o : overrides) apply_override(doc, o);
  auto cfg = ExperimentConfig::from_json(doc, base);
  cfg.output = fs::absolute(cfg.output).lexically_normal();
  if (!cfg.cache_dir.empty()) cfg.cache_dir = fs::absolute(cfg.cache_dir).lexically_normal();
  cfg.validate();
  return cfg;
}

}  // namespace sahar::app
