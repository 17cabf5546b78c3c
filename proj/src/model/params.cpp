// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/model/params.hpp"

#include <cmath>

namespace sahar::model {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

enum class InitKind { Zero, One, Glorot };

InitKind kind_of(const std::string& name) {
  if (ends_with(name, "_gain")) return InitKind::One;
  if (ends_with(name, "_w") || ends_with(name, ".w") || ends_with(name, "w_q") || ends_with(name, "w_k") ||
      ends_with(name, "w_v") || ends_with(name, "w_o") || ends_with(name, "_w1") || ends_with(name, "_w2") ||
      ends_with(name, "w_ga") || ends_with(name, "g_s")) {
    return InitKind::Glorot;
  }
  return InitKind::Zero;
}

}  // namespace

ModelParams zero_params(const ModelConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.d_model, dk = cfg.head_dim(), ff = cfg.ffn_width(), k = cfg.k_filters;
  ModelParams p;
  p.sensor_attn.conv_w = Tensor({cfg.sa_kernel, cfg.sensor_kernel(), 1, k});
  p.sensor_attn.conv_b = Tensor({k});
  p.sensor_attn.proj_w = Tensor({1, 1, k, 1});
  p.sensor_attn.proj_b = Tensor({1});
  p.embed_w = Tensor({cfg.num_channels, d});
  p.embed_b = Tensor({d});
  p.blocks.resize(cfg.n_blocks);
  for (auto& b : p.blocks) {
    b.heads.resize(cfg.n_heads);
    for (auto& h : b.heads) h = {Tensor({d, dk}), Tensor({d, dk}), Tensor({d, dk})};
    b.w_o = Tensor({cfg.n_heads * dk, d});
    b.ffn_w1 = Tensor({d, ff});
    b.ffn_b1 = Tensor({ff});
    b.ffn_w2 = Tensor({ff, d});
    b.ffn_b2 = Tensor({d});
    b.ln1_gain = Tensor({d});
    b.ln1_bias = Tensor({d});
    b.ln2_gain = Tensor({d});
    b.ln2_bias = Tensor({d});
  }
  p.temporal = {Tensor({d, d}), Tensor({d}), Tensor({d})};
  std::size_t in = d;
  for (auto h : cfg.fc_hidden) {
    p.classifier.push_back({Tensor({in, h}), Tensor({h})});
    in = h;
  }
  p.classifier.push_back({Tensor({in, cfg.num_classes}), Tensor({cfg.num_classes})});
  return p;
}

double init_bound(const ModelConfig& cfg, const Shape& shape) {
  double fan_in = 0, fan_out = 0;
  if (shape.size() == 4) {
    const double area = static_cast<double>(shape[0] * shape[1]);
    fan_in = area * static_cast<double>(shape[2]);
    fan_out = area * static_cast<double>(shape[3]);
  } else if (shape.size() == 2) {
    fan_in = static_cast<double>(shape[0]);
    fan_out = static_cast<double>(shape[1]);
  } else {
    // g_s: a d-vector scored against d-dimensional activations.
    fan_in = fan_out = static_cast<double>(cfg.d_model);
  }
  return std::sqrt(6.0 / (fan_in + fan_out));
}

ModelParams init_params(const ModelConfig& cfg, Rng& rng) {
  ModelParams p = zero_params(cfg);
  p.for_each([&](const std::string& name, Tensor& t) {
    switch (kind_of(name)) {
      case InitKind::Zero:
        break;
      case InitKind::One:
        t.fill(1.0);
        break;
      case InitKind::Glorot: {
        const double bound = init_bound(cfg, t.shape());
        for (double& v : t.data()) v = rng.uniform(-bound, bound);
        break;
      }
    }
  });
  return p;
}

std::size_t ModelParams::tensor_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Tensor&) { ++n; });
  return n;
}

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string&, const Tensor& t) { ok = ok && t.all_finite(); });
  return ok;
}

}  // namespace sahar::model
