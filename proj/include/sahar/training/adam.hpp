// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sahar/numerics/tensor.hpp"

namespace sahar::training {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<Tensor> m;  // first moments, one per parameter tensor
  std::vector<Tensor> v;  // second moments
  std::uint64_t t = 0;    // steps taken
};

// Zero moments shaped like `params`.
AdamState make_adam_state(std::span<const Tensor* const> params);

// One bias-corrected Adam update in place. DimensionError on any shape mismatch.
void adam_step(std::span<Tensor* const> params, std::span<const Tensor> grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace sahar::training
