// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The classifier as a composition of differentiable layers. Every layer takes
// an ad::Graph so the same code serves training (recording graph) and
// inference (non-recording graph).

#include <optional>
#include <vector>

#include "sahar/model/config.hpp"
#include "sahar/model/params.hpp"
#include "sahar/numerics/autodiff.hpp"

namespace sahar::model {

// PE[t, 2i] = sin(t / 10000^(2i/d)), PE[t, 2i+1] = cos(same). d must be even.
Tensor positional_encoding(std::size_t length, std::size_t d);

struct SensorAttentionOut {
  ad::Var weighted;  // [T x S]
  ad::Var scores;    // [T x S], rows sum to 1
  ad::Var logits;    // [T x S], pre-softmax
};

// Per-time-step softmax over sensors of a conv-derived logit map; the input is
// scaled by the scores. Sensors in `masked` get -inf logits (score exactly 0).
SensorAttentionOut sensor_attention(ad::Graph& g, ad::Var x, const SensorAttentionParams& p,
                                    const std::vector<std::size_t>& masked = {});

// Pointwise conv to d, scale by sqrt(d), add positional encoding, dropout.
ad::Var embed_and_encode(ad::Graph& g, ad::Var weighted, const Tensor& embed_w, const Tensor& embed_b,
                         double dropout, Rng& rng, bool training, bool zero_positional_encoding = false);

// softmax(q k^T / sqrt(d_k)) v for one head. `attn_out` receives the T x T map.
ad::Var attention_head(ad::Graph& g, ad::Var x, const HeadParams& p, ad::Var* attn_out = nullptr);

// Concatenated heads projected by w_o.
ad::Var multi_head_attention(ad::Graph& g, ad::Var x, const BlockParams& p, std::vector<ad::Var>* maps = nullptr);

// LN(x + dropout(mha(x))), then LN(h + dropout(ffn(h))).
ad::Var self_attention_block(ad::Graph& g, ad::Var x, const BlockParams& p, double dropout, double eps_ln, Rng& rng,
                             bool training, std::vector<ad::Var>* maps = nullptr);

struct TemporalAttentionOut {
  ad::Var context;  // [d]
  ad::Var alpha;    // [T], sums to 1
};

// g_t = tanh(W s_t + b); alpha = softmax_t(<g_t, g_s>); context = sum_t alpha_t s_t.
TemporalAttentionOut temporal_attention(ad::Graph& g, ad::Var seq, const TemporalAttentionParams& p);

struct ForwardOptions {
  bool training = false;
  bool zero_positional_encoding = false;
  std::vector<std::size_t> masked_sensors;
  bool capture_head_maps = false;
};

struct ForwardVars {
  ad::Var logits;  // [C]
  SensorAttentionOut sensor;
  ad::Var embedded;
  std::vector<ad::Var> block_outputs;
  TemporalAttentionOut temporal;
  std::vector<ad::Var> head_maps;  // block-major, then head
};

ForwardVars forward(ad::Graph& g, const Tensor& x, const ModelParams& params, const ModelConfig& cfg, Rng& rng,
                    const ForwardOptions& opts = {});

struct AttentionArtifacts {
  Tensor sensor_scores;   // [T x S]
  Tensor temporal_alpha;  // [T]
  std::vector<Tensor> per_head_maps;
};

struct Prediction {
  Tensor logits;
  AttentionArtifacts artifacts;
  std::size_t label() const;
};

// Inference-mode forward (no dropout, no tape).
Prediction predict(const Tensor& x, const ModelParams& params, const ModelConfig& cfg,
                   const ForwardOptions& opts = {});

std::size_t argmax(const Tensor& t);

}  // namespace sahar::model
