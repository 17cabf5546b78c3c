// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Tape-based reverse-mode differentiation. Every op below evaluates its
// forward rule from ops.hpp immediately and records a closure that applies the
// matching backward rule; Graph::backward replays the tape in reverse order.

#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sahar/numerics/ops.hpp"
#include "sahar/numerics/rng.hpp"
#include "sahar/numerics/tensor.hpp"

namespace sahar::ad {

struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
};

class Graph {
 public:
  // `record` false builds an inference-only graph: no backward closures, no gradients.
  explicit Graph(bool record = true) : record_(record) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const noexcept { return record_; }

  // A constant that does not receive gradients.
  Var constant(Tensor value);
  // A learnable leaf. The tensor is borrowed and must outlive the graph; binding
  // the same tensor twice returns the same Var.
  Var param(const Tensor& value);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() target w.r.t. `v`; zeros if none flowed.
  Tensor grad(Var v) const;
  // Gradient for a bound parameter tensor; zeros of its shape if it was never bound.
  Tensor param_grad(const Tensor& param) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }

  // Seeds d(out)/d(out) = 1 for a single-element output and back-propagates.
  void backward(Var out);

  std::size_t size() const noexcept { return nodes_.size(); }

  // Appends a node. `inputs` decide requires_grad; `backward_fn` receives the
  // graph and the upstream gradient of the new node.
  using BackwardFn = std::function<void(Graph&, const Tensor& upstream)>;
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward_fn);
  Var record(Tensor value, std::span<const Var> inputs, BackwardFn backward_fn);

  // Adds `g` into the gradient slot of `v` if `v` requires gradients.
  void accumulate(Var v, const Tensor& g);

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    BackwardFn backward;
    bool requires_grad = false;
  };

  bool record_;
  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, std::size_t> params_;
};

Var matmul(Graph& g, Var a, Var b);
Var transpose(Graph& g, Var a);
Var reshape(Graph& g, Var a, Shape shape);
Var softmax(Graph& g, Var x, std::size_t axis);
Var layer_norm(Graph& g, Var x, Var gain, Var bias, double eps);
Var conv1d_pointwise(Graph& g, Var x, Var w, Var b);
Var conv2d_same(Graph& g, Var x, Var w, Var b);
Var relu(Graph& g, Var x);
Var tanh(Graph& g, Var x);
Var add(Graph& g, Var a, Var b);
Var mul(Graph& g, Var a, Var b);
Var scale(Graph& g, Var x, double factor);
Var dropout(Graph& g, Var x, double rate, Rng& rng, bool training);
Var concat_cols(Graph& g, std::span<const Var> parts);
Var sum(Graph& g, Var x);
Var cross_entropy(Graph& g, Var logits, std::size_t target, double weight = 1.0);
// Mean of the given scalar nodes.
Var mean(Graph& g, std::span<const Var> scalars);

}  // namespace sahar::ad
