// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/numerics/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "sahar/errors.hpp"

namespace sahar {

namespace {

constexpr std::uint64_t kMaxRank = 16;

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw IntegrityError("tensor dump truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor& t) {
  put_u64(out, t.rank());
  for (auto e : t.shape()) put_u64(out, e);
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("failed writing tensor dump");
}

Tensor read_tensor(std::istream& in) {
  const auto rank = get_u64(in);
  if (rank == 0 || rank > kMaxRank) throw IntegrityError("tensor dump has invalid rank " + std::to_string(rank));
  Shape shape(rank);
  std::uint64_t count = 1;
  for (auto& e : shape) {
    e = get_u64(in);
    if (e == 0 || e > (std::uint64_t{1} << 40)) throw IntegrityError("tensor dump has invalid extent");
    count *= e;
    if (count > (std::uint64_t{1} << 40)) throw IntegrityError("tensor dump too large");
  }
  std::vector<double> data(count);
  for (auto& v : data) v = std::bit_cast<double>(get_u64(in));
  return Tensor(std::move(shape), std::move(data));
}

std::string encode_tensors(const std::vector<Tensor>& tensors) {
  std::ostringstream os(std::ios::binary);
  for (const auto& t : tensors) write_tensor(os, t);
  return os.str();
}

std::vector<Tensor> decode_tensors(const std::string& bytes, std::size_t count) {
  std::istringstream is(bytes, std::ios::binary);
  std::vector<Tensor> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(read_tensor(is));
  if (is.peek() != std::char_traits<char>::eof()) throw IntegrityError("trailing bytes after tensor dump");
  return out;
}

}  // namespace sahar
