// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Binary tensor dump: little-endian uint64 rank, uint64 extents, then float64
// scalars in row-major order. Several dumps may be concatenated in one stream.

#include <iosfwd>
#include <string>
#include <vector>

#include "sahar/numerics/tensor.hpp"

namespace sahar {

void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);

std::string encode_tensors(const std::vector<Tensor>& tensors);
std::vector<Tensor> decode_tensors(const std::string& bytes, std::size_t count);

}  // namespace sahar
