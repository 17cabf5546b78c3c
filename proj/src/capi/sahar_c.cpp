// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/sahar.h"

#include <algorithm>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "sahar/app/commands.hpp"
#include "sahar/errors.hpp"
#include "sahar/model/checkpoint.hpp"
#include "sahar/model/model.hpp"

struct sahar_experiment {
  sahar::app::ExperimentConfig config;
  std::string config_json;
};

struct sahar_model {
  sahar::model::Checkpoint checkpoint;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;
thread_local std::string g_last_result;

std::mutex g_log_mutex;
sahar_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void log_line(const std::string& line) {
  sahar_log_fn fn;
  void* user;
  {
    std::lock_guard lock(g_log_mutex);
    fn = g_log_fn;
    user = g_log_user;
  }
  if (fn) fn(line.c_str(), user);
}

sahar_status status_for(sahar::ErrorKind kind) {
  using sahar::ErrorKind;
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Compatibility:
      return SAHAR_ERR_CONFIG;
    case ErrorKind::Data:
    case ErrorKind::Dimension:
    case ErrorKind::Protocol:
      return SAHAR_ERR_DATA;
    case ErrorKind::Io:
      return SAHAR_ERR_IO;
    case ErrorKind::Integrity:
      return SAHAR_ERR_INTEGRITY;
    case ErrorKind::Numeric:
    case ErrorKind::Runtime:
      return SAHAR_ERR_RUNTIME;
  }
  return SAHAR_ERR_RUNTIME;
}

sahar_status fail(sahar_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `f`, translating exceptions into status codes and the thread's last error.
template <class F>
sahar_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return SAHAR_OK;
  } catch (const sahar::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(SAHAR_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SAHAR_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(SAHAR_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(SAHAR_ERR_RUNTIME, "unknown error");
  }
}

template <class F>
sahar_status command(F&& f) {
  return guarded([&] { g_last_result = f(sahar::app::Logger(log_line)).dump(); });
}

std::string text_or(const char* s, const char* fallback) { return s ? s : fallback; }

}  // namespace

extern "C" {

const char* sahar_version(void) { return "0.1.0"; }

const char* sahar_last_error(void) { return g_last_error.c_str(); }

const char* sahar_last_result(void) { return g_last_result.c_str(); }

void sahar_set_log_callback(sahar_log_fn fn, void* user) {
  std::lock_guard lock(g_log_mutex);
  g_log_fn = fn;
  g_log_user = user;
}

sahar_status sahar_experiment_open(const char* config_path, const char* const* overrides, size_t n_overrides,
                                   sahar_experiment** out) {
  if (!out) return fail(SAHAR_ERR_ARGUMENT, "output handle pointer is null");
  if (n_overrides > 0 && !overrides) return fail(SAHAR_ERR_ARGUMENT, "overrides pointer is null");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> ov;
    for (size_t i = 0; i < n_overrides; ++i) {
      if (!overrides[i]) throw sahar::ConfigError("override " + std::to_string(i) + " is null");
      ov.emplace_back(overrides[i]);
    }
    std::optional<std::filesystem::path> file;
    if (config_path) file = config_path;
    auto* exp = new sahar_experiment{sahar::app::load_experiment_config(file, ov), {}};
    exp->config_json = exp->config.to_json().dump(2);
    *out = exp;
  });
}

void sahar_experiment_free(sahar_experiment* exp) { delete exp; }

const char* sahar_experiment_config(const sahar_experiment* exp) { return exp ? exp->config_json.c_str() : ""; }

sahar_status sahar_ingest(sahar_experiment* exp) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  return command([&](const auto& log) { return sahar::app::cmd_ingest(exp->config, log); });
}

sahar_status sahar_train(sahar_experiment* exp, int force) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  return command([&](const auto& log) { return sahar::app::cmd_train(exp->config, force != 0, log); });
}

sahar_status sahar_eval(sahar_experiment* exp, const char* checkpoint_dir, const char* protocol, const char* split,
                        int force) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  if (!checkpoint_dir) return fail(SAHAR_ERR_ARGUMENT, "checkpoint directory is null");
  return command([&](const auto& log) {
    return sahar::app::cmd_eval(exp->config, checkpoint_dir, sahar::app::parse_protocol(text_or(protocol, "both")),
                                text_or(split, "test"), force != 0, log);
  });
}

sahar_status sahar_loso(sahar_experiment* exp, int force) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  return command([&](const auto& log) { return sahar::app::cmd_loso(exp->config, force != 0, log); });
}

sahar_status sahar_sweep(sahar_experiment* exp, const size_t* sizes, size_t n_sizes, int force) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  if (n_sizes > 0 && !sizes) return fail(SAHAR_ERR_ARGUMENT, "sizes pointer is null");
  return command([&](const auto& log) {
    return sahar::app::cmd_sweep(exp->config, std::vector<std::size_t>(sizes, sizes + n_sizes), force != 0, log);
  });
}

sahar_status sahar_attention_maps(sahar_experiment* exp, const char* checkpoint_dir, const char* split,
                                  const char* const* classes, size_t n_classes, int profile, int force) {
  if (!exp) return fail(SAHAR_ERR_ARGUMENT, "experiment handle is null");
  if (!checkpoint_dir) return fail(SAHAR_ERR_ARGUMENT, "checkpoint directory is null");
  if (n_classes > 0 && !classes) return fail(SAHAR_ERR_ARGUMENT, "classes pointer is null");
  return command([&](const auto& log) {
    std::vector<std::string> names;
    for (size_t i = 0; i < n_classes; ++i) names.emplace_back(classes[i] ? classes[i] : "");
    return sahar::app::cmd_attention_maps(exp->config, checkpoint_dir, text_or(split, "test"), names, profile != 0,
                                          force != 0, log);
  });
}

sahar_status sahar_synth(const char* out_dir, const char* options_json, int force) {
  if (!out_dir) return fail(SAHAR_ERR_ARGUMENT, "output directory is null");
  return command([&](const auto& log) {
    sahar::app::SynthOptions o;
    if (options_json) {
      const json j = json::parse(options_json);
      if (!j.is_object()) throw sahar::ConfigError("synth options must be a JSON object");
      for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "subjects") o.subjects = v.get<std::size_t>();
        else if (k == "segments") o.segments = v.get<std::size_t>();
        else if (k == "segment_length") o.segment_length = v.get<std::size_t>();
        else if (k == "seed") o.seed = v.get<std::uint64_t>();
        else if (k == "classes") o.spec.num_classes = v.get<std::size_t>();
        else if (k == "channels") o.spec.num_channels = v.get<std::size_t>();
        else if (k == "informative_channel") o.spec.informative_channel = v.get<std::size_t>();
        else throw sahar::ConfigError("unknown synth option '" + k + "'");
      }
    }
    return sahar::app::cmd_synth(out_dir, o, force != 0, log);
  });
}

sahar_status sahar_model_load(const char* checkpoint_dir, sahar_model** out) {
  if (!out) return fail(SAHAR_ERR_ARGUMENT, "output handle pointer is null");
  *out = nullptr;
  if (!checkpoint_dir) return fail(SAHAR_ERR_ARGUMENT, "checkpoint directory is null");
  return guarded([&] { *out = new sahar_model{sahar::model::load_checkpoint(checkpoint_dir)}; });
}

void sahar_model_free(sahar_model* model) { delete model; }

sahar_status sahar_model_shape(const sahar_model* model, size_t* window_length, size_t* num_channels,
                               size_t* num_classes) {
  if (!model) return fail(SAHAR_ERR_ARGUMENT, "model handle is null");
  const auto& c = model->checkpoint.config;
  if (window_length) *window_length = c.window_length;
  if (num_channels) *num_channels = c.num_channels;
  if (num_classes) *num_classes = c.num_classes;
  g_last_error.clear();
  return SAHAR_OK;
}

sahar_status sahar_model_predict(const sahar_model* model, const double* window, size_t window_len, double* logits,
                                 size_t logits_len, double* sensor_scores, size_t scores_len, size_t* label) {
  if (!model) return fail(SAHAR_ERR_ARGUMENT, "model handle is null");
  const auto& ckpt = model->checkpoint;
  const auto& c = ckpt.config;
  const size_t t = c.window_length, s = c.num_channels;
  if (!window || window_len != t * s) {
    return fail(SAHAR_ERR_ARGUMENT, "window must hold " + std::to_string(t * s) + " values");
  }
  if (logits && logits_len != c.num_classes) {
    return fail(SAHAR_ERR_ARGUMENT, "logits buffer must hold " + std::to_string(c.num_classes) + " values");
  }
  if (sensor_scores && scores_len != t * s) {
    return fail(SAHAR_ERR_ARGUMENT, "sensor score buffer must hold " + std::to_string(t * s) + " values");
  }
  return guarded([&] {
    sahar::data::RawRecording raw;
    raw.channels = sahar::Tensor({t, s});
    raw.labels.assign(t, 0);
    std::copy(window, window + t * s, raw.channels.data().begin());
    if (ckpt.meta.normalization) raw = sahar::data::normalize(raw, ckpt.meta.normalization).first;
    const sahar::Tensor& x = raw.channels;
    const auto p = sahar::model::predict(x, ckpt.params, c);
    if (logits) std::copy(p.logits.data().begin(), p.logits.data().end(), logits);
    if (sensor_scores) {
      std::copy(p.artifacts.sensor_scores.data().begin(), p.artifacts.sensor_scores.data().end(), sensor_scores);
    }
    if (label) *label = p.label();
  });
}

}  // extern "C"
