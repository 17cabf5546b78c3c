// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Forward/backward rule pairs for every differentiable operation the model uses.
// Each backward takes whatever its forward saved plus the upstream gradient and
// returns one gradient per input, shaped like that input.

#include <cstddef>
#include <span>
#include <vector>

#include "sahar/numerics/rng.hpp"
#include "sahar/numerics/tensor.hpp"

namespace sahar::ops {

struct BinaryGrads {
  Tensor da;
  Tensor db;
};

struct AffineGrads {
  Tensor dx;
  Tensor dw;
  Tensor db;
};

// C[MxN] = A[MxK] * B[KxN]
Tensor matmul(const Tensor& a, const Tensor& b);
BinaryGrads matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc);

Tensor transpose(const Tensor& a);

// Numerically stable softmax along `axis` (max subtracted). -inf entries are
// allowed and receive zero weight; NaN input is a NumericError.
Tensor softmax(const Tensor& x, std::size_t axis);
Tensor softmax_backward(const Tensor& y, const Tensor& dy, std::size_t axis);

struct LayerNormSaved {
  Tensor normalized;          // (x - mean) / sqrt(var + eps), pre-affine
  std::vector<double> inv_std;  // one per row
};
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps,
                  LayerNormSaved* saved = nullptr);
AffineGrads layer_norm_backward(const LayerNormSaved& saved, const Tensor& gain, const Tensor& dy);

// out[t] = x[t] * w + b, x: [T x Cin], w: [Cin x d], b: [d]
Tensor conv1d_pointwise(const Tensor& x, const Tensor& w, const Tensor& b);
AffineGrads conv1d_pointwise_backward(const Tensor& x, const Tensor& w, const Tensor& dy);

// Cross-correlation with symmetric zero padding; x: [H x W x Cin],
// w: [kh x kw x Cin x Cout], b: [Cout]. kh and kw must be odd.
Tensor conv2d_same(const Tensor& x, const Tensor& w, const Tensor& b);
AffineGrads conv2d_same_backward(const Tensor& x, const Tensor& w, const Tensor& dy);

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& dy);
Tensor tanh(const Tensor& x);
Tensor tanh_backward(const Tensor& y, const Tensor& dy);

// Same-shape addition, or b of rank 1 broadcast over the rows of a (b.size() == last extent of a).
Tensor add(const Tensor& a, const Tensor& b);
BinaryGrads add_backward(const Shape& b_shape, const Tensor& dc);

Tensor mul(const Tensor& a, const Tensor& b);
BinaryGrads mul_backward(const Tensor& a, const Tensor& b, const Tensor& dc);

Tensor scale(const Tensor& x, double factor);

// Inverted dropout. In training mode `mask` receives the per-scalar multiplier
// (0 or 1/(1-rate)); in inference mode the input is returned unchanged.
Tensor dropout(const Tensor& x, double rate, Rng& rng, bool training, Tensor* mask = nullptr);

// Concatenates rank-2 tensors with equal row counts along columns.
Tensor concat_cols(std::span<const Tensor> parts);
std::vector<Tensor> concat_cols_backward(std::span<const std::size_t> widths, const Tensor& dc);

// -weight * log softmax(logits)[target], via log-sum-exp. logits: rank 1.
double cross_entropy(const Tensor& logits, std::size_t target, double weight = 1.0);
Tensor cross_entropy_backward(const Tensor& logits, std::size_t target, double weight, double dloss);

}  // namespace sahar::ops
