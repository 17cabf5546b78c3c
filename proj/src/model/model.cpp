// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/model/model.hpp"

#include <cmath>
#include <limits>

#include "sahar/errors.hpp"

namespace sahar::model {

using ad::Graph;
using ad::Var;

Tensor positional_encoding(std::size_t length, std::size_t d) {
  if (d == 0 || d % 2 != 0) throw ConfigError("positional encoding needs an even width, got " + std::to_string(d));
  Tensor pe({length, d});
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t i = 0; i < d; i += 2) {
      const double angle =
          static_cast<double>(t) / std::pow(10000.0, static_cast<double>(i) / static_cast<double>(d));
      pe.at(t, i) = std::sin(angle);
      pe.at(t, i + 1) = std::cos(angle);
    }
  }
  return pe;
}

SensorAttentionOut sensor_attention(Graph& g, Var x, const SensorAttentionParams& p,
                                    const std::vector<std::size_t>& masked) {
  const Shape xs = g.value(x).shape();
  if (xs.size() != 2) throw DimensionError("sensor attention expects [T x S], got " + shape_string(xs));
  const std::size_t t = xs[0], s = xs[1];
  Var image = ad::reshape(g, x, {t, s, 1});
  Var feat = ad::conv2d_same(g, image, g.param(p.conv_w), g.param(p.conv_b));
  Var proj = ad::conv2d_same(g, feat, g.param(p.proj_w), g.param(p.proj_b));
  Var logits = ad::reshape(g, proj, {t, s});
  Var gated = logits;
  if (!masked.empty()) {
    Tensor mask({t, s});
    for (auto k : masked) {
      if (k >= s) throw DimensionError("masked sensor index " + std::to_string(k) + " out of range");
      for (std::size_t r = 0; r < t; ++r) mask.at(r, k) = -std::numeric_limits<double>::infinity();
    }
    gated = ad::add(g, logits, g.constant(std::move(mask)));
  }
  Var scores = ad::softmax(g, gated, 1);
  return {ad::mul(g, x, scores), scores, logits};
}

Var embed_and_encode(Graph& g, Var weighted, const Tensor& embed_w, const Tensor& embed_b, double dropout, Rng& rng,
                     bool training, bool zero_positional_encoding) {
  Var e = ad::conv1d_pointwise(g, weighted, g.param(embed_w), g.param(embed_b));
  const Shape es = g.value(e).shape();
  Var scaled = ad::scale(g, e, std::sqrt(static_cast<double>(es[1])));
  if (!zero_positional_encoding) scaled = ad::add(g, scaled, g.constant(positional_encoding(es[0], es[1])));
  return ad::dropout(g, scaled, dropout, rng, training);
}

Var attention_head(Graph& g, Var x, const HeadParams& p, Var* attn_out) {
  Var q = ad::matmul(g, x, g.param(p.w_q));
  Var k = ad::matmul(g, x, g.param(p.w_k));
  Var v = ad::matmul(g, x, g.param(p.w_v));
  const double dk = static_cast<double>(p.w_q.dim(1));
  Var scores = ad::scale(g, ad::matmul(g, q, ad::transpose(g, k)), 1.0 / std::sqrt(dk));
  Var attn = ad::softmax(g, scores, 1);
  if (attn_out) *attn_out = attn;
  return ad::matmul(g, attn, v);
}

Var multi_head_attention(Graph& g, Var x, const BlockParams& p, std::vector<Var>* maps) {
  std::vector<Var> heads;
  heads.reserve(p.heads.size());
  for (const auto& h : p.heads) {
    Var attn;
    heads.push_back(attention_head(g, x, h, &attn));
    if (maps) maps->push_back(attn);
  }
  Var cat = heads.size() == 1 ? heads.front() : ad::concat_cols(g, heads);
  return ad::matmul(g, cat, g.param(p.w_o));
}

Var self_attention_block(Graph& g, Var x, const BlockParams& p, double dropout, double eps_ln, Rng& rng,
                         bool training, std::vector<Var>* maps) {
  Var mha = multi_head_attention(g, x, p, maps);
  Var h = ad::layer_norm(g, ad::add(g, x, ad::dropout(g, mha, dropout, rng, training)), g.param(p.ln1_gain),
                         g.param(p.ln1_bias), eps_ln);
  Var hidden = ad::relu(g, ad::add(g, ad::matmul(g, h, g.param(p.ffn_w1)), g.param(p.ffn_b1)));
  Var ffn = ad::add(g, ad::matmul(g, hidden, g.param(p.ffn_w2)), g.param(p.ffn_b2));
  return ad::layer_norm(g, ad::add(g, h, ad::dropout(g, ffn, dropout, rng, training)), g.param(p.ln2_gain),
                        g.param(p.ln2_bias), eps_ln);
}

TemporalAttentionOut temporal_attention(Graph& g, Var seq, const TemporalAttentionParams& p) {
  const Shape ss = g.value(seq).shape();
  const std::size_t t = ss[0], d = ss[1];
  Var gt = ad::tanh(g, ad::add(g, ad::matmul(g, seq, g.param(p.w_ga)), g.param(p.b_ga)));
  Var gs = ad::reshape(g, g.param(p.g_s), {d, 1});
  Var logits = ad::reshape(g, ad::matmul(g, gt, gs), {t});
  Var alpha = ad::softmax(g, logits, 0);
  Var context = ad::reshape(g, ad::matmul(g, ad::reshape(g, alpha, {1, t}), seq), {d});
  return {context, alpha};
}

ForwardVars forward(Graph& g, const Tensor& x, const ModelParams& params, const ModelConfig& cfg, Rng& rng,
                    const ForwardOptions& opts) {
  if (x.shape() != Shape{cfg.window_length, cfg.num_channels}) {
    throw DimensionError("model input must be " +
                         shape_string({cfg.window_length, cfg.num_channels}) + ", got " + shape_string(x.shape()));
  }
  ForwardVars out;
  out.sensor = sensor_attention(g, g.constant(x), params.sensor_attn, opts.masked_sensors);
  out.embedded = embed_and_encode(g, out.sensor.weighted, params.embed_w, params.embed_b, cfg.dropout, rng,
                                  opts.training, opts.zero_positional_encoding);
  Var h = out.embedded;
  for (const auto& block : params.blocks) {
    h = self_attention_block(g, h, block, cfg.dropout, cfg.eps_ln, rng, opts.training,
                             opts.capture_head_maps ? &out.head_maps : nullptr);
    out.block_outputs.push_back(h);
  }
  out.temporal = temporal_attention(g, h, params.temporal);
  Var z = ad::dropout(g, out.temporal.context, cfg.dropout, rng, opts.training);
  for (std::size_t i = 0; i < params.classifier.size(); ++i) {
    const auto& layer = params.classifier[i];
    Var row = ad::reshape(g, z, {1, g.value(z).size()});
    z = ad::reshape(g, ad::add(g, ad::matmul(g, row, g.param(layer.w)), g.param(layer.b)), {layer.b.size()});
    if (i + 1 < params.classifier.size()) z = ad::relu(g, z);
  }
  out.logits = z;
  return out;
}

std::size_t argmax(const Tensor& t) {
  const auto v = t.data();
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::size_t Prediction::label() const { return argmax(logits); }

Prediction predict(const Tensor& x, const ModelParams& params, const ModelConfig& cfg, const ForwardOptions& opts) {
  Graph g(false);
  Rng unused(0);
  ForwardOptions o = opts;
  o.training = false;
  auto vars = forward(g, x, params, cfg, unused, o);
  Prediction p;
  p.logits = g.value(vars.logits);
  p.artifacts.sensor_scores = g.value(vars.sensor.scores);
  p.artifacts.temporal_alpha = g.value(vars.temporal.alpha);
  for (auto v : vars.head_maps) p.artifacts.per_head_maps.push_back(g.value(v));
  return p;
}

}  // namespace sahar::model
