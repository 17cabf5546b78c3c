// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "sahar/numerics/tensor.hpp"

namespace sahar {

// Central differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps) per coordinate.
// `f` must be pure; `x` is perturbed in place and restored.
Tensor finite_difference_grad(const std::function<double(const Tensor&)>& f, Tensor x, double eps = 1e-5);

// max_i |a_i - n_i| / max(1, |a_i|, |n_i|)
double max_relative_error(const Tensor& analytic, const Tensor& numeric);

}  // namespace sahar
