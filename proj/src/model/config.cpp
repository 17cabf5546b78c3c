// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/model/config.hpp"

#include <cmath>

#include "sahar/errors.hpp"

namespace sahar::model {

using nlohmann::json;

void ModelConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("model: " + what);
  };
  need(window_length >= 1, "window_length must be >= 1");
  need(num_channels >= 1, "num_channels must be >= 1");
  need(num_classes >= 1, "num_classes must be >= 1");
  need(d_model >= 2 && d_model % 2 == 0, "d_model must be even (positional encoding pairs sin/cos)");
  need(n_heads >= 1, "n_heads must be >= 1");
  need(d_model % n_heads == 0,
       "d_model (" + std::to_string(d_model) + ") must be divisible by n_heads (" + std::to_string(n_heads) + ")");
  need(k_filters >= 1, "k_filters must be >= 1");
  need(sa_kernel % 2 == 1, "sa_kernel must be odd");
  need(sensor_kernel() % 2 == 1, "sa_kernel_sensor must be odd");
  for (auto h : fc_hidden) need(h >= 1, "fc_hidden widths must be >= 1");
  need(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  need(std::isfinite(eps_ln) && eps_ln > 0.0, "eps_ln must be positive");
}

json ModelConfig::to_json() const {
  return {{"window_length", window_length},
          {"num_channels", num_channels},
          {"num_classes", num_classes},
          {"d_model", d_model},
          {"n_blocks", n_blocks},
          {"n_heads", n_heads},
          {"ffn_dim", ffn_dim},
          {"k_filters", k_filters},
          {"sa_kernel", sa_kernel},
          {"sa_kernel_sensor", sa_kernel_sensor},
          {"fc_hidden", fc_hidden},
          {"dropout", dropout},
          {"eps_ln", eps_ln}};
}

void ModelConfig::apply_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    const auto& v = it.value();
    try {
      if (k == "window_length") window_length = v.get<std::size_t>();
      else if (k == "num_channels") num_channels = v.get<std::size_t>();
      else if (k == "num_classes") num_classes = v.get<std::size_t>();
      else if (k == "d_model") d_model = v.get<std::size_t>();
      else if (k == "n_blocks") n_blocks = v.get<std::size_t>();
      else if (k == "n_heads") n_heads = v.get<std::size_t>();
      else if (k == "ffn_dim") ffn_dim = v.get<std::size_t>();
      else if (k == "k_filters") k_filters = v.get<std::size_t>();
      else if (k == "sa_kernel") sa_kernel = v.get<std::size_t>();
      else if (k == "sa_kernel_sensor") sa_kernel_sensor = v.get<std::size_t>();
      else if (k == "fc_hidden") fc_hidden = v.get<std::vector<std::size_t>>();
      else if (k == "dropout") dropout = v.get<double>();
      else if (k == "eps_ln") eps_ln = v.get<double>();
      else throw ConfigError("model: unknown field '" + k + "'");
    } catch (const json::exception& e) {
      throw ConfigError("model." + k + ": " + e.what());
    }
  }
}

ModelConfig ModelConfig::from_json(const json& j) {
  ModelConfig c;
  c.apply_json(j);
  return c;
}

std::vector<std::string> differing_fields(const ModelConfig& a, const ModelConfig& b) {
  std::vector<std::string> out;
  const json ja = a.to_json(), jb = b.to_json();
  for (auto it = ja.begin(); it != ja.end(); ++it) {
    if (jb.at(it.key()) != it.value()) out.push_back(it.key());
  }
  return out;
}

}  // namespace sahar::model
