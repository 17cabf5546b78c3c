// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sahar/model/config.hpp"
#include "sahar/numerics/rng.hpp"
#include "sahar/numerics/tensor.hpp"

namespace sahar::model {

struct SensorAttentionParams {
  Tensor conv_w;  // [kt x ks x 1 x k]
  Tensor conv_b;  // [k]
  Tensor proj_w;  // [1 x 1 x k x 1]
  Tensor proj_b;  // [1]
};

struct HeadParams {
  Tensor w_q, w_k, w_v;  // [d x d_k]
};

struct BlockParams {
  std::vector<HeadParams> heads;
  Tensor w_o;  // [(n * d_k) x d]
  Tensor ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  Tensor ln1_gain, ln1_bias, ln2_gain, ln2_bias;
};

struct TemporalAttentionParams {
  Tensor w_ga;  // [d x d]
  Tensor b_ga;  // [d]
  Tensor g_s;   // [d]
};

struct DenseParams {
  Tensor w, b;
};

struct ModelParams {
  SensorAttentionParams sensor_attn;
  Tensor embed_w;  // [S x d]
  Tensor embed_b;  // [d]
  std::vector<BlockParams> blocks;
  TemporalAttentionParams temporal;
  std::vector<DenseParams> classifier;  // hidden layers then the output layer

  // Visits every tensor with a stable dotted name, always in the same order.
  template <class F>
  void for_each(F&& f) {
    for_each_impl(*this, f);
  }
  template <class F>
  void for_each(F&& f) const {
    for_each_impl(*this, f);
  }

  std::size_t tensor_count() const;
  std::size_t scalar_count() const;
  bool all_finite() const;

 private:
  template <class Self, class F>
  static void for_each_impl(Self& p, F& f) {
    f("sensor_attn.conv_w", p.sensor_attn.conv_w);
    f("sensor_attn.conv_b", p.sensor_attn.conv_b);
    f("sensor_attn.proj_w", p.sensor_attn.proj_w);
    f("sensor_attn.proj_b", p.sensor_attn.proj_b);
    f("embed.w", p.embed_w);
    f("embed.b", p.embed_b);
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
      auto& b = p.blocks[i];
      const std::string pre = "blocks." + std::to_string(i) + ".";
      for (std::size_t h = 0; h < b.heads.size(); ++h) {
        const std::string hp = pre + "heads." + std::to_string(h) + ".";
        f(hp + "w_q", b.heads[h].w_q);
        f(hp + "w_k", b.heads[h].w_k);
        f(hp + "w_v", b.heads[h].w_v);
      }
      f(pre + "w_o", b.w_o);
      f(pre + "ffn_w1", b.ffn_w1);
      f(pre + "ffn_b1", b.ffn_b1);
      f(pre + "ffn_w2", b.ffn_w2);
      f(pre + "ffn_b2", b.ffn_b2);
      f(pre + "ln1_gain", b.ln1_gain);
      f(pre + "ln1_bias", b.ln1_bias);
      f(pre + "ln2_gain", b.ln2_gain);
      f(pre + "ln2_bias", b.ln2_bias);
    }
    f("temporal.w_ga", p.temporal.w_ga);
    f("temporal.b_ga", p.temporal.b_ga);
    f("temporal.g_s", p.temporal.g_s);
    for (std::size_t i = 0; i < p.classifier.size(); ++i) {
      const std::string pre = "classifier." + std::to_string(i) + ".";
      f(pre + "w", p.classifier[i].w);
      f(pre + "b", p.classifier[i].b);
    }
  }
};

// Zero-filled tensors of the shapes `cfg` implies.
ModelParams zero_params(const ModelConfig& cfg);

// Weights ~ U(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))); biases 0;
// layer-norm gain 1, bias 0. Drawn in for_each order.
ModelParams init_params(const ModelConfig& cfg, Rng& rng);

// Glorot bound used by init_params for a weight of this shape.
double init_bound(const ModelConfig& cfg, const Shape& shape);

}  // namespace sahar::model
