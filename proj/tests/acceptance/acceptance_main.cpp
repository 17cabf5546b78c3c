// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
// Criterion 10 needs a local PAMAP2 copy in $SAHAR_PAMAP2_DIR and reports SKIP without one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "../support/param_harness.hpp"
#include "json.hpp"
#include "sahar/app/commands.hpp"
#include "sahar/app/experiment_config.hpp"
#include "sahar/app/synthetic.hpp"
#include "sahar/data/splits.hpp"
#include "sahar/data/windows.hpp"
#include "sahar/errors.hpp"
#include "sahar/evaluation/metrics.hpp"
#include "sahar/model/checkpoint.hpp"
#include "sahar/model/model.hpp"
#include "sahar/training/trainer.hpp"

namespace fs = std::filesystem;
using namespace sahar;
using sahar::testing::check_gradients;
using sahar::testing::check_param_gradients;
using sahar::testing::random_tensor;
using ad::Var;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

model::ModelConfig small_config(Rng& rng) {
  model::ModelConfig cfg;
  cfg.window_length = 2 + rng.below(7);
  cfg.num_channels = 1 + rng.below(4);
  cfg.num_classes = 1 + rng.below(3);
  cfg.d_model = rng.bernoulli(0.5) ? 8 : 16;
  cfg.n_heads = rng.bernoulli(0.5) ? 2 : 4;
  cfg.n_blocks = 1 + rng.below(2);
  cfg.ffn_dim = 2 * cfg.d_model;
  cfg.k_filters = 1 + rng.below(4);
  cfg.sa_kernel = 1 + 2 * rng.below(2);
  cfg.sa_kernel_sensor = 1 + 2 * rng.below(2);
  cfg.dropout = 0.0;
  return cfg;
}

// ---------------------------------------------------------------- 1

Outcome gradient_suite() {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::map<std::string, double> worst;
  auto note = [&](const std::string& name, double e) { worst[name] = std::max(worst[name], e); };

  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t m = 1 + rng.below(6), k = 1 + rng.below(6), n = 1 + rng.below(6);
    auto op = [&](const std::string& name, const sahar::testing::GraphBuilder& b, std::vector<Tensor> in) {
      note(name, check_gradients(b, in, rng).worst());
    };
    op("matmul", [](ad::Graph& g, auto in) { return ad::matmul(g, in[0], in[1]); },
       {random_tensor({m, k}, rng), random_tensor({k, n}, rng)});
    op("transpose", [](ad::Graph& g, auto in) { return ad::transpose(g, in[0]); }, {random_tensor({m, k}, rng)});
    op("reshape", [m, k](ad::Graph& g, auto in) { return ad::reshape(g, in[0], Shape{k, m}); },
       {random_tensor({m, k}, rng)});
    for (std::size_t axis : {0u, 1u}) {
      op("softmax", [axis](ad::Graph& g, auto in) { return ad::softmax(g, in[0], axis); },
         {random_tensor({m, k}, rng, -3, 3)});
    }
    op("layer_norm", [](ad::Graph& g, auto in) { return ad::layer_norm(g, in[0], in[1], in[2], 1e-5); },
       {random_tensor({m, k + 1}, rng), random_tensor({k + 1}, rng), random_tensor({k + 1}, rng)});
    op("conv1d_pointwise", [](ad::Graph& g, auto in) { return ad::conv1d_pointwise(g, in[0], in[1], in[2]); },
       {random_tensor({m, k}, rng), random_tensor({k, n}, rng), random_tensor({n}, rng)});
    const std::size_t kh = 1 + 2 * rng.below(2), kw = 1 + 2 * rng.below(2), cin = 1 + rng.below(2);
    op("conv2d_same", [](ad::Graph& g, auto in) { return ad::conv2d_same(g, in[0], in[1], in[2]); },
       {random_tensor({m, k, cin}, rng), random_tensor({kh, kw, cin, n}, rng), random_tensor({n}, rng)});
    // Keep inputs away from the kink at zero.
    Tensor away = random_tensor({m, k}, rng, 0.1, 1.0);
    for (auto& v : away.data())
      if (rng.bernoulli(0.5)) v = -v;
    op("relu", [](ad::Graph& g, auto in) { return ad::relu(g, in[0]); }, {away});
    op("tanh", [](ad::Graph& g, auto in) { return ad::tanh(g, in[0]); }, {random_tensor({m, k}, rng, -2, 2)});
    op("add", [](ad::Graph& g, auto in) { return ad::add(g, in[0], in[1]); },
       {random_tensor({m, k}, rng), random_tensor({m, k}, rng)});
    op("add_broadcast", [](ad::Graph& g, auto in) { return ad::add(g, in[0], in[1]); },
       {random_tensor({m, k}, rng), random_tensor({k}, rng)});
    op("mul", [](ad::Graph& g, auto in) { return ad::mul(g, in[0], in[1]); },
       {random_tensor({m, k}, rng), random_tensor({m, k}, rng)});
    op("scale", [](ad::Graph& g, auto in) { return ad::scale(g, in[0], -1.7); }, {random_tensor({m, k}, rng)});
    const auto mask_seed = rng.next_u64();
    op("dropout",
       [mask_seed](ad::Graph& g, auto in) {
         Rng r(mask_seed);
         return ad::dropout(g, in[0], 0.4, r, true);
       },
       {random_tensor({m, k}, rng)});
    op("concat_cols",
       [](ad::Graph& g, auto in) {
         std::vector<Var> parts{in[0], in[1]};
         return ad::concat_cols(g, parts);
       },
       {random_tensor({m, k}, rng), random_tensor({m, n}, rng)});
    op("sum", [](ad::Graph& g, auto in) { return ad::sum(g, in[0]); }, {random_tensor({m, k}, rng)});
    const auto target = rng.below(n);
    op("cross_entropy", [target](ad::Graph& g, auto in) { return ad::cross_entropy(g, in[0], target, 0.7); },
       {random_tensor({n}, rng, -4, 4)});
    op("mean",
       [](ad::Graph& g, auto in) {
         std::vector<Var> parts{ad::sum(g, in[0]), ad::sum(g, ad::mul(g, in[1], in[1]))};
         return ad::mean(g, parts);
       },
       {random_tensor({m, k}, rng), random_tensor({n}, rng)});
  }

  for (int trial = 0; trial < 3; ++trial) {
    auto cfg = small_config(rng);
    auto p = model::init_params(cfg, rng);
    const Tensor x = random_tensor({cfg.window_length, cfg.num_channels}, rng, -2, 2);
    const Tensor seq = random_tensor({cfg.window_length, cfg.d_model}, rng, -2, 2);
    Rng unused(0);
    auto& sa = p.sensor_attn;
    auto& blk = p.blocks[0];
    auto& tp = p.temporal;
    auto layer = [&](const std::string& name, const sahar::testing::ParamBuilder& b,
                     std::vector<std::pair<std::string, Tensor*>> ps) {
      note(name, sahar::testing::worst(check_param_gradients(b, ps, rng)));
    };
    layer("sensor_attention",
          [&](ad::Graph& g) { return model::sensor_attention(g, g.constant(x), sa).weighted; },
          {{"conv_w", &sa.conv_w}, {"conv_b", &sa.conv_b}, {"proj_w", &sa.proj_w}, {"proj_b", &sa.proj_b}});
    layer("embed_and_encode",
          [&](ad::Graph& g) {
            return model::embed_and_encode(g, g.constant(x), p.embed_w, p.embed_b, 0.0, unused, false);
          },
          {{"embed_w", &p.embed_w}, {"embed_b", &p.embed_b}});
    std::vector<std::pair<std::string, Tensor*>> head{
        {"w_q", &blk.heads[0].w_q}, {"w_k", &blk.heads[0].w_k}, {"w_v", &blk.heads[0].w_v}};
    layer("attention_head", [&](ad::Graph& g) { return model::attention_head(g, g.constant(seq), blk.heads[0]); },
          head);
    std::vector<std::pair<std::string, Tensor*>> block;
    for (auto& h : blk.heads) {
      block.insert(block.end(), {{"w_q", &h.w_q}, {"w_k", &h.w_k}, {"w_v", &h.w_v}});
    }
    block.emplace_back("w_o", &blk.w_o);
    layer("multi_head_attention",
          [&](ad::Graph& g) { return model::multi_head_attention(g, g.constant(seq), blk); }, block);
    block.insert(block.end(), {{"ffn_w1", &blk.ffn_w1},
                               {"ffn_b1", &blk.ffn_b1},
                               {"ffn_w2", &blk.ffn_w2},
                               {"ffn_b2", &blk.ffn_b2},
                               {"ln1_gain", &blk.ln1_gain},
                               {"ln1_bias", &blk.ln1_bias},
                               {"ln2_gain", &blk.ln2_gain},
                               {"ln2_bias", &blk.ln2_bias}});
    layer("self_attention_block",
          [&](ad::Graph& g) {
            return model::self_attention_block(g, g.constant(seq), blk, 0.0, cfg.eps_ln, unused, false);
          },
          block);
    layer("temporal_attention",
          [&](ad::Graph& g) { return model::temporal_attention(g, g.constant(seq), tp).context; },
          {{"w_ga", &tp.w_ga}, {"b_ga", &tp.b_ga}, {"g_s", &tp.g_s}});

    if (trial == 2) cfg.fc_hidden = {5};
    auto full = model::init_params(cfg, rng);
    layer("model",
          [&](ad::Graph& g) {
            Rng r(0);
            return model::forward(g, x, full, cfg, r).logits;
          },
          sahar::testing::all_params(full));
  }

  const double secs = seconds_since(t0);
  double overall = 0.0;
  std::string worst_name;
  for (const auto& [name, e] : worst) {
    if (e >= overall) {
      overall = e;
      worst_name = name;
    }
  }
  const bool ok = overall <= 1e-4 && secs <= 120.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          std::to_string(worst.size()) + " ops/layers, max rel err " + fmt("%.2e", overall) + " (" + worst_name +
              "), " + fmt("%.1f", secs) + " s"};
}

// ---------------------------------------------------------------- 2

Outcome normalization_suite() {
  Rng rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto cfg = small_config(rng);
    cfg.window_length = 1 + rng.below(16);
    cfg.num_channels = 1 + rng.below(8);
    auto params = model::init_params(cfg, rng);
    model::ForwardOptions opts;
    opts.capture_head_maps = true;
    const double amp = std::pow(10.0, rng.uniform(-2, 2));
    const auto p = model::predict(random_tensor({cfg.window_length, cfg.num_channels}, rng, -amp, amp), params,
                                  cfg, opts);
    auto rows = [&](const Tensor& m) {
      for (std::size_t r = 0; r < m.dim(0); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m.dim(1); ++c) s += m.at(r, c);
        worst = std::max(worst, std::abs(s - 1.0));
      }
    };
    rows(p.artifacts.sensor_scores);
    for (const auto& m : p.artifacts.per_head_maps) rows(m);
    if (p.artifacts.per_head_maps.size() != cfg.n_blocks * cfg.n_heads) worst = INFINITY;
    worst = std::max(worst, std::abs(sum(p.artifacts.temporal_alpha) - 1.0));
  }
  return {worst <= 1e-5 ? Verdict::Pass : Verdict::Fail, "100 configs, max |sum - 1| " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 3

Tensor permute_rows(const Tensor& x, const std::vector<std::size_t>& perm) {
  Tensor out(x.shape());
  for (std::size_t t = 0; t < perm.size(); ++t)
    for (std::size_t i = 0; i < x.dim(1); ++i) out.at(t, i) = x.at(perm[t], i);
  return out;
}

double permuted_diff(const Tensor& base, const Tensor& moved, const std::vector<std::size_t>& perm) {
  double d = 0.0;
  for (std::size_t t = 0; t < perm.size(); ++t)
    for (std::size_t i = 0; i < base.dim(1); ++i) d = std::max(d, std::abs(moved.at(t, i) - base.at(perm[t], i)));
  return d;
}

Outcome permutation_suite() {
  Rng rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    // Whole model: positional encoding zeroed and a sensor-attention kernel of
    // time extent 1, so nothing else depends on position.
    auto cfg = small_config(rng);
    cfg.window_length = 3 + rng.below(10);
    cfg.sa_kernel = 1;
    auto params = model::init_params(cfg, rng);
    const Tensor x = random_tensor({cfg.window_length, cfg.num_channels}, rng, -2, 2);
    std::vector<std::size_t> perm(cfg.window_length);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    model::ForwardOptions opts;
    opts.zero_positional_encoding = true;
    auto run = [&](const Tensor& in, ad::Graph& g) {
      Rng r(0);
      return model::forward(g, in, params, cfg, r, opts);
    };
    ad::Graph g0(false), g1(false);
    const auto a = run(x, g0);
    const auto b = run(permute_rows(x, perm), g1);
    for (std::size_t i = 0; i < a.block_outputs.size(); ++i) {
      worst = std::max(worst, permuted_diff(g0.value(a.block_outputs[i]), g1.value(b.block_outputs[i]), perm));
    }
    worst = std::max(worst, max_abs_diff(g0.value(a.temporal.context), g1.value(b.temporal.context)));
    worst = std::max(worst, max_abs_diff(g0.value(a.logits), g1.value(b.logits)));

    // Block stack and temporal pooling alone, on arbitrary sequences.
    auto bcfg = small_config(rng);
    auto bp = model::init_params(bcfg, rng);
    const std::size_t t = 3 + rng.below(10);
    const Tensor seq = random_tensor({t, bcfg.d_model}, rng, -2, 2);
    std::vector<std::size_t> bperm(t);
    std::iota(bperm.begin(), bperm.end(), 0);
    rng.shuffle(std::span<std::size_t>(bperm));
    Rng unused(0);
    auto stack = [&](const Tensor& in) {
      ad::Graph g(false);
      Var h = g.constant(in);
      for (const auto& blk : bp.blocks) h = model::self_attention_block(g, h, blk, 0.0, bcfg.eps_ln, unused, false);
      return std::make_pair(g.value(h), g.value(model::temporal_attention(g, h, bp.temporal).context));
    };
    const auto [h0, c0] = stack(seq);
    const auto [h1, c1] = stack(permute_rows(seq, bperm));
    worst = std::max({worst, permuted_diff(h0, h1, bperm), max_abs_diff(c0, c1)});
  }
  return {worst <= 1e-6 ? Verdict::Pass : Verdict::Fail, "20 permutations, max abs diff " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 4

Outcome reduction_suite() {
  Rng rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t t = 1 + rng.below(12), d = 2 + rng.below(15);
    model::BlockParams blk;
    blk.heads.push_back({random_tensor({d, d}, rng), random_tensor({d, d}, rng), random_tensor({d, d}, rng)});
    blk.w_o = Tensor({d, d});
    for (std::size_t i = 0; i < d; ++i) blk.w_o.at(i, i) = 1.0;
    const Tensor x = random_tensor({t, d}, rng, -2, 2);

    ad::Graph g(false);
    const Tensor got = g.value(model::multi_head_attention(g, g.constant(x), blk));

    // softmax(x Wq (x Wk)^T / sqrt(d)) x Wv, with plain loops.
    const auto& h = blk.heads[0];
    auto project = [&](const Tensor& w) {
      std::vector<std::vector<double>> out(t, std::vector<double>(d, 0.0));
      for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t a = 0; a < d; ++a) out[r][c] += x.at(r, a) * w.at(a, c);
      return out;
    };
    const auto q = project(h.w_q), k = project(h.w_k), v = project(h.w_v);
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<double> s(t);
      for (std::size_t j = 0; j < t; ++j) {
        double dot = 0.0;
        for (std::size_t a = 0; a < d; ++a) dot += q[i][a] * k[j][a];
        s[j] = dot / std::sqrt(static_cast<double>(d));
      }
      const double mx = *std::max_element(s.begin(), s.end());
      double z = 0.0;
      for (auto& e : s) z += (e = std::exp(e - mx));
      for (std::size_t c = 0; c < d; ++c) {
        double o = 0.0;
        for (std::size_t j = 0; j < t; ++j) o += s[j] / z * v[j][c];
        worst = std::max(worst, std::abs(o - got.at(i, c)));
      }
    }
  }
  return {worst <= 1e-6 ? Verdict::Pass : Verdict::Fail, "20 cases, max abs diff " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 5, 6

constexpr std::size_t kInformative = 2;

struct PlantedRun {
  std::uint64_t seed = 0;
  double train_f1 = 0.0;
  double heldout_f1 = 0.0;
  double seconds = 0.0;
  std::vector<double> mean_scores;  // per channel, over held-out windows and time
};

PlantedRun planted_run(std::uint64_t seed) {
  app::SyntheticSpec spec;
  spec.informative_channel = kInformative;
  Rng rng(seed);
  const auto train = app::planted_windows(spec, 64, 32, rng);
  const auto heldout = app::planted_windows(spec, 96, 32, rng);

  model::ModelConfig cfg;
  cfg.window_length = 32;
  cfg.num_channels = spec.num_channels;
  cfg.num_classes = spec.num_classes;
  cfg.d_model = 16;
  cfg.n_heads = 2;
  cfg.ffn_dim = 32;
  cfg.k_filters = 4;
  cfg.sa_kernel_sensor = 1;
  cfg.dropout = 0.1;
  training::TrainRunConfig run;
  run.batch_size = 16;
  run.max_epochs = 200;
  run.seed = seed;

  PlantedRun out;
  out.seed = seed;
  const auto t0 = Clock::now();
  Rng init(seed);
  const auto res = training::train(cfg, model::init_params(cfg, init), train, {}, run);
  out.seconds = seconds_since(t0);

  auto f1 = [&](const data::WindowedDataset& ds) {
    evaluation::ConfusionMatrix cm(cfg.num_classes);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      cm.add(static_cast<std::size_t>(ds.labels[i]), model::predict(ds.windows[i], res.best_params, cfg).label());
    }
    return evaluation::macro_f1(cm);
  };
  out.train_f1 = f1(train);
  out.heldout_f1 = f1(heldout);
  out.mean_scores.assign(cfg.num_channels, 0.0);
  for (const auto& w : heldout.windows) {
    const auto p = model::predict(w, res.best_params, cfg);
    for (std::size_t t = 0; t < cfg.window_length; ++t)
      for (std::size_t c = 0; c < cfg.num_channels; ++c) out.mean_scores[c] += p.artifacts.sensor_scores.at(t, c);
  }
  for (auto& m : out.mean_scores) m /= static_cast<double>(heldout.size() * cfg.window_length);
  return out;
}

Outcome overfit_oracle(const std::vector<PlantedRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    ok = ok && r.train_f1 >= 0.99 && r.heldout_f1 >= 0.90 && r.seconds <= 300.0;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(r.seed) + " train " +
              fmt("%.4f", r.train_f1) + " held-out " + fmt("%.4f", r.heldout_f1) + " " + fmt("%.1f", r.seconds) +
              " s";
  }
  return {ok ? Verdict::Pass : Verdict::Fail, detail};
}

Outcome interpretability_oracle(const std::vector<PlantedRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    double best_noise = 0.0;
    for (std::size_t c = 0; c < r.mean_scores.size(); ++c)
      if (c != kInformative) best_noise = std::max(best_noise, r.mean_scores[c]);
    ok = ok && r.mean_scores[kInformative] > best_noise;
    detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(r.seed) + " channel " +
              std::to_string(kInformative) + " " + fmt("%.4f", r.mean_scores[kInformative]) + " vs max noise " +
              fmt("%.4f", best_noise);
  }
  return {ok ? Verdict::Pass : Verdict::Fail, detail};
}

// ---------------------------------------------------------------- 7

// Counts tp/fp/fn per class by scanning the pairs; mean F1 over classes that occur.
double brute_macro_f1(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred, std::size_t n) {
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < n; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == c && pred[i] == c) tp += 1;
      if (truth[i] != c && pred[i] == c) fp += 1;
      if (truth[i] == c && pred[i] != c) fn += 1;
    }
    if (tp + fp + fn == 0) continue;
    ++present;
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    total += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  return total / static_cast<double>(present);
}

Outcome metric_oracle() {
  Rng rng(707);
  double worst = 0.0;
  std::size_t degenerate = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(8), len = 1 + rng.below(60);
    // Restrict some draws to a subset of classes so that absent classes occur.
    const std::size_t truth_span = rng.bernoulli(0.3) ? 1 + rng.below(n) : n;
    const std::size_t pred_span = rng.bernoulli(0.3) ? 1 + rng.below(n) : n;
    std::vector<std::size_t> truth(len), pred(len);
    for (std::size_t i = 0; i < len; ++i) {
      truth[i] = rng.below(truth_span);
      pred[i] = rng.bernoulli(0.4) ? truth[i] : rng.below(pred_span);
    }
    if (truth_span < n || pred_span < n) ++degenerate;
    const double got = evaluation::macro_f1(evaluation::confusion_from_labels(truth, pred, n));
    worst = std::max(worst, std::abs(got - brute_macro_f1(truth, pred, n)));
  }
  return {worst <= 1e-12 ? Verdict::Pass : Verdict::Fail,
          "1000 sets (" + std::to_string(degenerate) + " with absent classes), max abs diff " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 8

data::RawRecording random_recording(Rng& rng, std::size_t n, std::size_t s, bool with_null, const std::string& subject) {
  data::RawRecording r;
  r.subject_id = subject;
  r.channels = random_tensor({n, s}, rng);
  // Runs of constant labels of random length.
  int label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || rng.bernoulli(0.2)) {
      label = static_cast<int>(rng.below(3));
      if (with_null && rng.bernoulli(0.2)) label = data::kNullLabel;
    }
    r.labels.push_back(label);
  }
  return r;
}

int brute_majority(const std::vector<int>& labels, std::size_t begin, std::size_t end) {
  std::map<int, std::size_t> count, last;
  for (std::size_t i = begin; i < end; ++i) {
    ++count[labels[i]];
    last[labels[i]] = i;
  }
  int best = 0;
  std::size_t best_count = 0, best_last = 0;
  for (const auto& [lab, cnt] : count) {
    if (cnt > best_count || (cnt == best_count && last[lab] > best_last)) {
      best = lab;
      best_count = cnt;
      best_last = last[lab];
    }
  }
  return best;
}

Outcome protocol_oracles() {
  Rng rng(808);
  std::size_t cases = 0, failures = 0;
  std::string first_failure;
  auto expect = [&](bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures++ == 0) first_failure = what;
  };

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(80), s = 1 + rng.below(3), t = 1 + rng.below(16);
    const bool keep_null = rng.bernoulli(0.5);
    const auto rec = random_recording(rng, n, s, true, "x");

    // Sliding windows: starts 0, stride, ... while start + T <= N; label by majority.
    const double overlap = rng.below(4) * 0.25;
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t * (1.0 - overlap))));
    std::vector<data::WindowSpan> spans;
    std::vector<int> labels;
    std::size_t total = 0;
    for (std::size_t start = 0; start + t <= n; start += stride) {
      ++total;
      const int lab = brute_majority(rec.labels, start, start + t);
      if (lab == data::kNullLabel && !keep_null) continue;
      spans.push_back({start, start + t});
      labels.push_back(lab);
    }
    expect(data::window_count(n, t, stride) == total, "window count");
    if (t > n) {
      // Shorter than one window: refused rather than silently empty.
      bool refused = false;
      try {
        data::make_windows_with_stride(rec, t, stride, data::WindowLabeling::Majority, keep_null);
      } catch (const DataError&) {
        refused = true;
      }
      expect(refused, "short recording refused");
    }
    const auto ds = t > n ? data::WindowedDataset{}
                          : data::make_windows_with_stride(rec, t, stride, data::WindowLabeling::Majority, keep_null);
    bool content = ds.size() == spans.size();
    for (std::size_t w = 0; content && w < ds.size(); ++w)
      for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < s; ++c) content = content && ds.windows[w].at(r, c) == rec.channels.at(spans[w].start + r, c);
    expect(ds.window_spans == spans && ds.labels == labels && content, "sliding windows");

    // Majority with ties on a short random label sequence.
    std::vector<int> short_labels(1 + rng.below(9));
    for (auto& l : short_labels) l = static_cast<int>(rng.below(3));
    expect(data::majority_label(short_labels) == brute_majority(short_labels, 0, short_labels.size()),
           "majority label");

    // Boundary windows: each constant-label run is cut into chunks of T, a
    // short tail repeats its last sample.
    std::vector<data::WindowSpan> bspans;
    std::vector<int> blabels;
    std::vector<std::vector<std::size_t>> rows;
    for (std::size_t seg = 0; seg < n;) {
      std::size_t end = seg;
      while (end < n && rec.labels[end] == rec.labels[seg]) ++end;
      for (std::size_t start = seg; start < end; start += t) {
        const std::size_t stop = std::min(start + t, end);
        if (rec.labels[seg] == data::kNullLabel && !keep_null) continue;
        bspans.push_back({start, stop});
        blabels.push_back(rec.labels[seg]);
        std::vector<std::size_t> r;
        for (std::size_t i = 0; i < t; ++i) r.push_back(std::min(start + i, stop - 1));
        rows.push_back(r);
      }
      seg = end;
    }
    const auto bds = data::make_boundary_padded_windows(rec, t, keep_null);
    bool bcontent = bds.size() == rows.size();
    for (std::size_t w = 0; bcontent && w < bds.size(); ++w)
      for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < s; ++c) bcontent = bcontent && bds.windows[w].at(r, c) == rec.channels.at(rows[w][r], c);
    expect(bds.window_spans == bspans && bds.labels == blabels && bcontent, "boundary padding");

    // LOSO: one fold per subject in first-appearance order; the held-out
    // subject's recordings are the test set, everything else trains.
    const std::size_t nrec = 1 + rng.below(8);
    std::vector<data::RawRecording> recs;
    for (std::size_t i = 0; i < nrec; ++i) {
      auto r = random_recording(rng, 1 + rng.below(5), 1, false, "s" + std::to_string(rng.below(4)));
      r.channels.at(0, 0) = static_cast<double>(i);  // identifies the recording
      recs.push_back(r);
    }
    std::vector<std::string> order;
    for (const auto& r : recs)
      if (std::find(order.begin(), order.end(), r.subject_id) == order.end()) order.push_back(r.subject_id);
    if (order.size() < 2) {
      bool refused = false;
      try {
        data::loso_splits(recs);
      } catch (const ProtocolError&) {
        refused = true;
      }
      expect(refused, "single-subject loso refused");
      continue;
    }
    const auto folds = data::loso_splits(recs);
    bool fold_ok = folds.size() == order.size();
    for (std::size_t f = 0; fold_ok && f < folds.size(); ++f) {
      std::vector<double> want_train, want_test, got_train, got_test;
      for (const auto& r : recs) (r.subject_id == order[f] ? want_test : want_train).push_back(r.channels.at(0, 0));
      for (const auto& r : folds[f].train) got_train.push_back(r.channels.at(0, 0));
      for (const auto& r : folds[f].test) got_test.push_back(r.channels.at(0, 0));
      fold_ok = folds[f].held_out_subject == order[f] && want_train == got_train && want_test == got_test;
    }
    expect(fold_ok, "loso folds");
  }
  return {failures == 0 ? Verdict::Pass : Verdict::Fail,
          std::to_string(cases) + " cases, " + std::to_string(failures) + " mismatches" +
              (failures ? " (first: " + first_failure + ")" : "")};
}

// ---------------------------------------------------------------- 9

Outcome determinism_suite(const fs::path& work) {
  app::SyntheticSpec spec;
  spec.informative_channel = 1;
  spec.num_channels = 4;
  Rng rng(909);
  auto train = app::planted_windows(spec, 40, 12, rng);
  std::vector<data::RawRecording> val{app::planted_recording(spec, 6, 20, "v", rng)};
  model::ModelConfig cfg;
  cfg.window_length = 12;
  cfg.num_channels = spec.num_channels;
  cfg.num_classes = spec.num_classes;
  cfg.d_model = 8;
  cfg.n_heads = 2;
  cfg.ffn_dim = 16;
  cfg.k_filters = 3;
  cfg.dropout = 0.2;
  training::TrainRunConfig run;
  run.batch_size = 8;
  run.max_epochs = 6;
  run.patience = 100;
  run.seed = 42;

  auto once = [&](std::size_t threads) {
    auto r = run;
    r.threads = threads;
    Rng init(run.seed);
    return training::train(cfg, model::init_params(cfg, init), train, val, r);
  };
  const auto a = once(1), b = once(3);
  bool history = a.history.size() == b.history.size() && a.best_epoch == b.best_epoch;
  for (std::size_t i = 0; history && i < a.history.size(); ++i) {
    const auto &x = a.history[i], &y = b.history[i];
    history = x.epoch == y.epoch && same_bits(x.train_loss, y.train_loss) &&
              same_bits(x.val_f1_sample, y.val_f1_sample) && same_bits(x.val_f1_window, y.val_f1_window);
  }

  const fs::path dir = work / "checkpoint";
  fs::remove_all(dir);
  model::CheckpointMeta meta;
  meta.seed = run.seed;
  model::save_checkpoint(dir, {cfg, a.best_params, meta});
  const auto back = model::load_checkpoint(dir);
  bool logits = back.config == cfg;
  for (std::size_t i = 0; logits && i < train.size(); ++i) {
    logits = same_bits(model::predict(train.windows[i], a.best_params, cfg).logits,
                       model::predict(train.windows[i], back.params, back.config).logits);
  }
  return {history && logits ? Verdict::Pass : Verdict::Fail,
          std::to_string(a.history.size()) + " epochs history " + (history ? "identical" : "DIFFERS") + ", " +
              std::to_string(train.size()) + " reloaded logits " + (logits ? "identical" : "DIFFER")};
}

// ---------------------------------------------------------------- 10

Outcome pamap2_run(const fs::path& work) {
  const char* root = std::getenv("SAHAR_PAMAP2_DIR");
  if (!root || !*root) return {Verdict::Skip, "SAHAR_PAMAP2_DIR not set; no local PAMAP2 copy"};
  fs::path dir = root;
  if (fs::is_directory(dir / "Protocol")) dir /= "Protocol";
  nlohmann::json recordings = nlohmann::json::array();
  bool has_test = false;
  for (int s = 101; s <= 109; ++s) {
    const fs::path f = dir / ("subject" + std::to_string(s) + ".dat");
    if (!fs::exists(f)) continue;
    recordings.push_back({{"subject", std::to_string(s)}, {"path", f.string()}});
    has_test = has_test || s == 106;
  }
  if (!has_test) return {Verdict::Fail, "subject106.dat not found under " + dir.string()};

  const char* epochs = std::getenv("SAHAR_PAMAP2_EPOCHS");
  const fs::path out = work / "pamap2";
  std::vector<std::string> overrides{
      "schema=" + nlohmann::json((fs::path(SAHAR_SOURCE_DIR) / "schemas/pamap2.schema.json").string()).dump(),
      "data.recordings=" + recordings.dump(),
      "preprocess.keep_every=3",
      "window.overlap=0.5",
      "split.mode=\"subjects\"",
      "split.test_subjects=[\"106\"]",
      "model.d_model=128",
      "model.n_blocks=2",
      "train.threads=0",
      std::string("train.max_epochs=") + (epochs && *epochs ? epochs : "30"),
      "output=" + nlohmann::json(out.string()).dump()};
  const auto t0 = Clock::now();
  const auto cfg = app::load_experiment_config(std::nullopt, overrides);
  const auto summary = app::cmd_train(cfg, true, [](const std::string& line) { std::fprintf(stderr, "%s\n", line.c_str()); });
  const auto& test = summary.at("test");
  if (test.at("sample_wise").at("macro_f1").is_null() || test.at("window_wise").at("macro_f1").is_null()) {
    return {Verdict::Fail, "a protocol scored nothing"};
  }
  const double sample = test["sample_wise"]["macro_f1"].get<double>();
  const double window = test["window_wise"]["macro_f1"].get<double>();
  return {window >= sample - 0.05 ? Verdict::Pass : Verdict::Fail,
          "sample-wise " + fmt("%.4f", sample) + " window-wise " + fmt("%.4f", window) + ", " +
              std::to_string(summary.at("epochs_run").get<int>()) + " epochs, " + fmt("%.0f", seconds_since(t0)) +
              " s"};
}

}  // namespace

int main() {
  const fs::path work = fs::path(SAHAR_ACCEPTANCE_WORK_DIR);
  fs::create_directories(work);
  bool all_ok = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    if (o.verdict == Verdict::Fail) all_ok = false;
    std::printf("[%s] %2d %-22s %s\n", tag, id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gradients", gradient_suite);
  report(2, "normalization", normalization_suite);
  report(3, "permutation", permutation_suite);
  report(4, "single-head reduction", reduction_suite);

  std::vector<PlantedRun> planted;
  std::string planted_error;
  try {
    for (std::uint64_t seed : {1u, 2u, 3u}) planted.push_back(planted_run(seed));
  } catch (const std::exception& e) {
    planted_error = e.what();
  }
  auto planted_check = [&](Outcome (*f)(const std::vector<PlantedRun>&)) {
    return [&, f] {
      if (!planted_error.empty()) return Outcome{Verdict::Fail, "exception: " + planted_error};
      return f(planted);
    };
  };
  report(5, "overfit", planted_check(overfit_oracle));
  report(6, "interpretability", planted_check(interpretability_oracle));

  report(7, "macro F1", metric_oracle);
  report(8, "protocols", protocol_oracles);
  report(9, "determinism", [&] { return determinism_suite(work); });
  report(10, "PAMAP2", [&] { return pamap2_run(work); });

  std::printf("%s\n", all_ok ? "all criteria passed" : "some criteria FAILED");
  return all_ok ? 0 : 1;
}
