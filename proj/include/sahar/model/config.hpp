// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace sahar::model {

struct ModelConfig {
  std::size_t window_length = 0;  // T
  std::size_t num_channels = 0;   // S
  std::size_t num_classes = 0;    // C
  std::size_t d_model = 128;
  std::size_t n_blocks = 2;
  std::size_t n_heads = 4;
  std::size_t ffn_dim = 0;  // 0: 4 * d_model
  std::size_t k_filters = 16;
  std::size_t sa_kernel = 3;         // extent along time
  std::size_t sa_kernel_sensor = 0;  // extent along sensors; 0: same as sa_kernel
  std::vector<std::size_t> fc_hidden;  // widths of optional hidden classifier layers
  double dropout = 0.2;
  double eps_ln = 1e-5;

  std::size_t head_dim() const { return d_model / n_heads; }
  std::size_t ffn_width() const { return ffn_dim == 0 ? 4 * d_model : ffn_dim; }
  std::size_t sensor_kernel() const { return sa_kernel_sensor == 0 ? sa_kernel : sa_kernel_sensor; }

  // Throws ConfigError naming the first violated constraint.
  void validate() const;

  nlohmann::json to_json() const;
  // Overwrites the fields present in `j`; unknown keys are a ConfigError.
  void apply_json(const nlohmann::json& j);
  static ModelConfig from_json(const nlohmann::json& j);

  bool operator==(const ModelConfig&) const = default;
};

// Names of fields whose values differ, sorted.
std::vector<std::string> differing_fields(const ModelConfig& a, const ModelConfig& b);

}  // namespace sahar::model
