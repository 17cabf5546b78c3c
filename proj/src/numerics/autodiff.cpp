// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/numerics/autodiff.hpp"

#include <memory>

#include "sahar/errors.hpp"

namespace sahar::ad {

Var Graph::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Graph::param(const Tensor& value) {
  if (auto it = params_.find(&value); it != params_.end()) return Var{it->second};
  Node n;
  n.borrowed = &value;
  n.requires_grad = record_;
  nodes_.push_back(std::move(n));
  params_.emplace(&value, nodes_.size() - 1);
  return Var{nodes_.size() - 1};
}

const Tensor& Graph::value(Var v) const {
  const Node& n = nodes_.at(v.id);
  return n.borrowed ? *n.borrowed : n.owned;
}

Tensor Graph::grad(Var v) const {
  const Node& n = nodes_.at(v.id);
  if (n.grad.empty()) return Tensor::zeros_like(value(v));
  return n.grad;
}

Tensor Graph::param_grad(const Tensor& param) const {
  auto it = params_.find(&param);
  if (it == params_.end()) return Tensor::zeros_like(param);
  return grad(Var{it->second});
}

Var Graph::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward_fn) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward_fn));
}

Var Graph::record(Tensor value, std::span<const Var> inputs, BackwardFn backward_fn) {
  Node n;
  n.owned = std::move(value);
  if (record_) {
    for (Var in : inputs) n.requires_grad = n.requires_grad || nodes_.at(in.id).requires_grad;
    if (n.requires_grad) n.backward = std::move(backward_fn);
  }
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

void Graph::accumulate(Var v, const Tensor& g) {
  Node& n = nodes_.at(v.id);
  if (!n.requires_grad) return;
  if (n.grad.empty()) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Graph::backward(Var out) {
  if (!record_) throw ProtocolError("backward() on a graph built without recording");
  if (value(out).size() != 1) {
    throw DimensionError("backward() needs a scalar output, got " + shape_string(value(out).shape()));
  }
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[out.id].requires_grad) return;
  nodes_[out.id].grad = Tensor(value(out).shape(), 1.0);
  for (std::size_t i = out.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backward || n.grad.empty()) continue;
    // The closure may accumulate into earlier nodes only, so `n` stays valid.
    const Tensor upstream = n.grad;
    n.backward(*this, upstream);
  }
}

Var matmul(Graph& g, Var a, Var b) {
  return g.record(ops::matmul(g.value(a), g.value(b)), {a, b}, [a, b](Graph& gr, const Tensor& up) {
    auto grads = ops::matmul_backward(gr.value(a), gr.value(b), up);
    gr.accumulate(a, grads.da);
    gr.accumulate(b, grads.db);
  });
}

Var transpose(Graph& g, Var a) {
  return g.record(ops::transpose(g.value(a)), {a},
                  [a](Graph& gr, const Tensor& up) { gr.accumulate(a, ops::transpose(up)); });
}

Var reshape(Graph& g, Var a, Shape shape) {
  const Shape original = g.value(a).shape();
  return g.record(g.value(a).reshaped(std::move(shape)), {a},
                  [a, original](Graph& gr, const Tensor& up) { gr.accumulate(a, up.reshaped(original)); });
}

Var softmax(Graph& g, Var x, std::size_t axis) {
  Tensor y = ops::softmax(g.value(x), axis);
  auto saved = std::make_shared<Tensor>(g.recording() ? y : Tensor());
  return g.record(std::move(y), {x}, [x, saved, axis](Graph& gr, const Tensor& up) {
    gr.accumulate(x, ops::softmax_backward(*saved, up, axis));
  });
}

Var layer_norm(Graph& g, Var x, Var gain, Var bias, double eps) {
  auto saved = std::make_shared<ops::LayerNormSaved>();
  Tensor y = ops::layer_norm(g.value(x), g.value(gain), g.value(bias), eps, g.recording() ? saved.get() : nullptr);
  return g.record(std::move(y), {x, gain, bias}, [x, gain, bias, saved](Graph& gr, const Tensor& up) {
    auto grads = ops::layer_norm_backward(*saved, gr.value(gain), up);
    gr.accumulate(x, grads.dx);
    gr.accumulate(gain, grads.dw);
    gr.accumulate(bias, grads.db);
  });
}

Var conv1d_pointwise(Graph& g, Var x, Var w, Var b) {
  return g.record(ops::conv1d_pointwise(g.value(x), g.value(w), g.value(b)), {x, w, b},
                  [x, w, b](Graph& gr, const Tensor& up) {
                    auto grads = ops::conv1d_pointwise_backward(gr.value(x), gr.value(w), up);
                    gr.accumulate(x, grads.dx);
                    gr.accumulate(w, grads.dw);
                    gr.accumulate(b, grads.db);
                  });
}

Var conv2d_same(Graph& g, Var x, Var w, Var b) {
  return g.record(ops::conv2d_same(g.value(x), g.value(w), g.value(b)), {x, w, b},
                  [x, w, b](Graph& gr, const Tensor& up) {
                    auto grads = ops::conv2d_same_backward(gr.value(x), gr.value(w), up);
                    gr.accumulate(x, grads.dx);
                    gr.accumulate(w, grads.dw);
                    gr.accumulate(b, grads.db);
                  });
}

Var relu(Graph& g, Var x) {
  return g.record(ops::relu(g.value(x)), {x},
                  [x](Graph& gr, const Tensor& up) { gr.accumulate(x, ops::relu_backward(gr.value(x), up)); });
}

Var tanh(Graph& g, Var x) {
  Tensor y = ops::tanh(g.value(x));
  auto saved = std::make_shared<Tensor>(g.recording() ? y : Tensor());
  return g.record(std::move(y), {x},
                  [x, saved](Graph& gr, const Tensor& up) { gr.accumulate(x, ops::tanh_backward(*saved, up)); });
}

Var add(Graph& g, Var a, Var b) {
  const Shape b_shape = g.value(b).shape();
  return g.record(ops::add(g.value(a), g.value(b)), {a, b}, [a, b, b_shape](Graph& gr, const Tensor& up) {
    auto grads = ops::add_backward(b_shape, up);
    gr.accumulate(a, grads.da);
    gr.accumulate(b, grads.db);
  });
}

Var mul(Graph& g, Var a, Var b) {
  return g.record(ops::mul(g.value(a), g.value(b)), {a, b}, [a, b](Graph& gr, const Tensor& up) {
    auto grads = ops::mul_backward(gr.value(a), gr.value(b), up);
    gr.accumulate(a, grads.da);
    gr.accumulate(b, grads.db);
  });
}

Var scale(Graph& g, Var x, double factor) {
  return g.record(ops::scale(g.value(x), factor), {x},
                  [x, factor](Graph& gr, const Tensor& up) { gr.accumulate(x, ops::scale(up, factor)); });
}

Var dropout(Graph& g, Var x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  auto mask = std::make_shared<Tensor>();
  Tensor y = ops::dropout(g.value(x), rate, rng, true, mask.get());
  return g.record(std::move(y), {x}, [x, mask](Graph& gr, const Tensor& up) { gr.accumulate(x, ops::mul(up, *mask)); });
}

Var concat_cols(Graph& g, std::span<const Var> parts) {
  std::vector<Tensor> values;
  std::vector<std::size_t> widths;
  values.reserve(parts.size());
  for (Var p : parts) {
    values.push_back(g.value(p));
    widths.push_back(g.value(p).dim(1));
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return g.record(ops::concat_cols(values), parts, [inputs, widths](Graph& gr, const Tensor& up) {
    auto grads = ops::concat_cols_backward(widths, up);
    for (std::size_t i = 0; i < inputs.size(); ++i) gr.accumulate(inputs[i], grads[i]);
  });
}

Var sum(Graph& g, Var x) {
  const Shape shape = g.value(x).shape();
  return g.record(Tensor({1}, {sahar::sum(g.value(x))}), {x},
                  [x, shape](Graph& gr, const Tensor& up) { gr.accumulate(x, Tensor(shape, up[0])); });
}

Var cross_entropy(Graph& g, Var logits, std::size_t target, double weight) {
  const double loss = ops::cross_entropy(g.value(logits), target, weight);
  return g.record(Tensor({1}, {loss}), {logits}, [logits, target, weight](Graph& gr, const Tensor& up) {
    gr.accumulate(logits, ops::cross_entropy_backward(gr.value(logits), target, weight, up[0]));
  });
}

Var mean(Graph& g, std::span<const Var> scalars) {
  if (scalars.empty()) throw DimensionError("mean of zero scalars");
  double total = 0.0;
  for (Var s : scalars) total += g.value(s)[0];
  const double inv = 1.0 / static_cast<double>(scalars.size());
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  return g.record(Tensor({1}, {total * inv}), scalars, [inputs, inv](Graph& gr, const Tensor& up) {
    const Tensor share({1}, up[0] * inv);
    for (Var s : inputs) gr.accumulate(s, share);
  });
}

}  // namespace sahar::ad
