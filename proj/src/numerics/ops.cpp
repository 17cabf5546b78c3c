// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sahar/errors.hpp"

namespace sahar::ops {

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op, const char* name) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": " + name + " must have rank " + std::to_string(rank) + ", got " +
                         shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

struct AxisLayout {
  std::size_t outer = 1;
  std::size_t n = 1;
  std::size_t inner = 1;
};

AxisLayout axis_layout(const Shape& shape, std::size_t axis) {
  if (axis >= shape.size()) {
    throw DimensionError("softmax: axis " + std::to_string(axis) + " invalid for " + shape_string(shape));
  }
  AxisLayout l;
  for (std::size_t a = 0; a < axis; ++a) l.outer *= shape[a];
  l.n = shape[axis];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) l.inner *= shape[a];
  return l;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul", "a");
  require_rank(b, 2, "matmul", "b");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions disagree, " + shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  Tensor c({m, n});
  auto cd = c.data();
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ad[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = bd.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

BinaryGrads matmul_backward(const Tensor& a, const Tensor& b, const Tensor& dc) {
  return {matmul(dc, transpose(b)), matmul(transpose(a), dc)};
}

Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose", "a");
  const std::size_t r = a.dim(0), c = a.dim(1);
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  const auto l = axis_layout(x.shape(), axis);
  Tensor y(x.shape());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.n * l.inner + in;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < l.n; ++i) {
        const double v = x[base + i * l.inner];
        if (std::isnan(v)) throw NumericError("softmax: NaN input");
        mx = std::max(mx, v);
      }
      if (!std::isfinite(mx)) throw NumericError("softmax: slice has no finite maximum");
      double z = 0.0;
      for (std::size_t i = 0; i < l.n; ++i) {
        const double e = std::exp(x[base + i * l.inner] - mx);
        y[base + i * l.inner] = e;
        z += e;
      }
      for (std::size_t i = 0; i < l.n; ++i) y[base + i * l.inner] /= z;
    }
  }
  return y;
}

Tensor softmax_backward(const Tensor& y, const Tensor& dy, std::size_t axis) {
  require_same_shape(y, dy, "softmax_backward");
  const auto l = axis_layout(y.shape(), axis);
  Tensor dx(y.shape());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.n * l.inner + in;
      double dot = 0.0;
      for (std::size_t i = 0; i < l.n; ++i) dot += y[base + i * l.inner] * dy[base + i * l.inner];
      for (std::size_t i = 0; i < l.n; ++i) {
        const auto idx = base + i * l.inner;
        dx[idx] = y[idx] * (dy[idx] - dot);
      }
    }
  }
  return dx;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps, LayerNormSaved* saved) {
  require_rank(x, 2, "layer_norm", "x");
  const std::size_t rows = x.dim(0), d = x.dim(1);
  if (gain.shape() != Shape{d} || bias.shape() != Shape{d}) {
    throw DimensionError("layer_norm: gain/bias must be [" + std::to_string(d) + "], got " +
                         shape_string(gain.shape()) + " and " + shape_string(bias.shape()));
  }
  Tensor normalized(x.shape());
  std::vector<double> inv_std(rows);
  Tensor y(x.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += x.at(r, j);
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x.at(r, j) - mean;
      var += c * c;
    }
    var /= static_cast<double>(d);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < d; ++j) {
      const double n = (x.at(r, j) - mean) * inv_std[r];
      normalized.at(r, j) = n;
      y.at(r, j) = n * gain[j] + bias[j];
    }
  }
  if (saved) {
    saved->normalized = std::move(normalized);
    saved->inv_std = std::move(inv_std);
  }
  return y;
}

AffineGrads layer_norm_backward(const LayerNormSaved& saved, const Tensor& gain, const Tensor& dy) {
  require_same_shape(saved.normalized, dy, "layer_norm_backward");
  const std::size_t rows = dy.dim(0), d = dy.dim(1);
  AffineGrads g{Tensor(dy.shape()), Tensor({d}), Tensor({d})};
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean_dn = 0.0, mean_dn_n = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double dn = dy.at(r, j) * gain[j];
      mean_dn += dn;
      mean_dn_n += dn * saved.normalized.at(r, j);
      g.dw[j] += dy.at(r, j) * saved.normalized.at(r, j);
      g.db[j] += dy.at(r, j);
    }
    mean_dn *= inv_d;
    mean_dn_n *= inv_d;
    for (std::size_t j = 0; j < d; ++j) {
      const double dn = dy.at(r, j) * gain[j];
      g.dx.at(r, j) = saved.inv_std[r] * (dn - mean_dn - saved.normalized.at(r, j) * mean_dn_n);
    }
  }
  return g;
}

Tensor conv1d_pointwise(const Tensor& x, const Tensor& w, const Tensor& b) {
  require_rank(x, 2, "conv1d_pointwise", "x");
  require_rank(w, 2, "conv1d_pointwise", "w");
  if (w.dim(0) != x.dim(1) || b.shape() != Shape{w.dim(1)}) {
    throw DimensionError("conv1d_pointwise: incompatible shapes x" + shape_string(x.shape()) + " w" +
                         shape_string(w.shape()) + " b" + shape_string(b.shape()));
  }
  return add(matmul(x, w), b);
}

AffineGrads conv1d_pointwise_backward(const Tensor& x, const Tensor& w, const Tensor& dy) {
  auto mm = matmul_backward(x, w, dy);
  auto bias = add_backward(Shape{w.dim(1)}, dy);
  return {std::move(mm.da), std::move(mm.db), std::move(bias.db)};
}

namespace {
void check_conv2d(const Tensor& x, const Tensor& w, const Tensor& b) {
  require_rank(x, 3, "conv2d_same", "x");
  require_rank(w, 4, "conv2d_same", "w");
  if (w.dim(0) % 2 == 0 || w.dim(1) % 2 == 0) {
    throw ConfigError("conv2d_same: kernel extents must be odd, got " + shape_string(w.shape()));
  }
  if (w.dim(2) != x.dim(2) || b.shape() != Shape{w.dim(3)}) {
    throw DimensionError("conv2d_same: incompatible shapes x" + shape_string(x.shape()) + " w" +
                         shape_string(w.shape()) + " b" + shape_string(b.shape()));
  }
}
}  // namespace

Tensor conv2d_same(const Tensor& x, const Tensor& w, const Tensor& b) {
  check_conv2d(x, w, b);
  const std::size_t H = x.dim(0), W = x.dim(1), cin = x.dim(2);
  const std::size_t kh = w.dim(0), kw = w.dim(1), cout = w.dim(3);
  const auto ph = static_cast<std::ptrdiff_t>(kh / 2), pw = static_cast<std::ptrdiff_t>(kw / 2);
  Tensor y({H, W, cout});
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t ww = 0; ww < W; ++ww) {
      double* out = &y.at(h, ww, 0);
      for (std::size_t o = 0; o < cout; ++o) out[o] = b[o];
      for (std::size_t i = 0; i < kh; ++i) {
        const auto hh = static_cast<std::ptrdiff_t>(h + i) - ph;
        if (hh < 0 || hh >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t j = 0; j < kw; ++j) {
          const auto wj = static_cast<std::ptrdiff_t>(ww + j) - pw;
          if (wj < 0 || wj >= static_cast<std::ptrdiff_t>(W)) continue;
          for (std::size_t c = 0; c < cin; ++c) {
            const double xv = x.at(static_cast<std::size_t>(hh), static_cast<std::size_t>(wj), c);
            const double* wrow = w.data().data() + ((i * kw + j) * cin + c) * cout;
            for (std::size_t o = 0; o < cout; ++o) out[o] += xv * wrow[o];
          }
        }
      }
    }
  }
  return y;
}

AffineGrads conv2d_same_backward(const Tensor& x, const Tensor& w, const Tensor& dy) {
  const std::size_t H = x.dim(0), W = x.dim(1), cin = x.dim(2);
  const std::size_t kh = w.dim(0), kw = w.dim(1), cout = w.dim(3);
  if (dy.shape() != Shape{H, W, cout}) throw DimensionError("conv2d_same_backward: bad upstream shape");
  const auto ph = static_cast<std::ptrdiff_t>(kh / 2), pw = static_cast<std::ptrdiff_t>(kw / 2);
  AffineGrads g{Tensor(x.shape()), Tensor(w.shape()), Tensor({cout})};
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t ww = 0; ww < W; ++ww) {
      const double* up = dy.data().data() + (h * W + ww) * cout;
      for (std::size_t o = 0; o < cout; ++o) g.db[o] += up[o];
      for (std::size_t i = 0; i < kh; ++i) {
        const auto hh = static_cast<std::ptrdiff_t>(h + i) - ph;
        if (hh < 0 || hh >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t j = 0; j < kw; ++j) {
          const auto wj = static_cast<std::ptrdiff_t>(ww + j) - pw;
          if (wj < 0 || wj >= static_cast<std::ptrdiff_t>(W)) continue;
          for (std::size_t c = 0; c < cin; ++c) {
            const auto xh = static_cast<std::size_t>(hh), xw = static_cast<std::size_t>(wj);
            const double xv = x.at(xh, xw, c);
            const std::size_t wbase = ((i * kw + j) * cin + c) * cout;
            double acc = 0.0;
            for (std::size_t o = 0; o < cout; ++o) {
              g.dw[wbase + o] += xv * up[o];
              acc += w[wbase + o] * up[o];
            }
            g.dx.at(xh, xw, c) += acc;
          }
        }
      }
    }
  }
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.data()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
  require_same_shape(x, dy, "relu_backward");
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
  return dx;
}

Tensor tanh(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.data()) v = std::tanh(v);
  return y;
}

Tensor tanh_backward(const Tensor& y, const Tensor& dy) {
  require_same_shape(y, dy, "tanh_backward");
  Tensor dx(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * (1.0 - y[i] * y[i]);
  return dx;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) {
    Tensor c = a;
    c += b;
    return c;
  }
  if (b.rank() == 1 && a.rank() >= 1 && a.shape().back() == b.size()) {
    Tensor c = a;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i % n];
    return c;
  }
  throw DimensionError("add: cannot broadcast " + shape_string(b.shape()) + " onto " + shape_string(a.shape()));
}

BinaryGrads add_backward(const Shape& b_shape, const Tensor& dc) {
  if (b_shape == dc.shape()) return {dc, dc};
  Tensor db(b_shape);
  const std::size_t n = db.size();
  for (std::size_t i = 0; i < dc.size(); ++i) db[i % n] += dc[i];
  return {dc, std::move(db)};
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= b[i];
  return c;
}

BinaryGrads mul_backward(const Tensor& a, const Tensor& b, const Tensor& dc) {
  return {mul(dc, b), mul(dc, a)};
}

Tensor scale(const Tensor& x, double factor) {
  Tensor y = x;
  y *= factor;
  return y;
}

Tensor dropout(const Tensor& x, double rate, Rng& rng, bool training, Tensor* mask) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) {
    if (mask) *mask = Tensor(x.shape(), 1.0);
    return x;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor m(x.shape());
  for (auto& v : m.data()) v = rng.uniform() < rate ? 0.0 : keep_scale;
  Tensor y = mul(x, m);
  if (mask) *mask = std::move(m);
  return y;
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t rows = parts[0].dim(0);
  std::size_t cols = 0;
  for (const auto& p : parts) {
    require_rank(p, 2, "concat_cols", "part");
    if (p.dim(0) != rows) throw DimensionError("concat_cols: row counts differ");
    cols += p.dim(1);
  }
  Tensor out({rows, cols});
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < p.dim(1); ++c) out.at(r, offset + c) = p.at(r, c);
    offset += p.dim(1);
  }
  return out;
}

std::vector<Tensor> concat_cols_backward(std::span<const std::size_t> widths, const Tensor& dc) {
  std::vector<Tensor> grads;
  grads.reserve(widths.size());
  const std::size_t rows = dc.dim(0);
  std::size_t offset = 0;
  for (auto w : widths) {
    Tensor g({rows, w});
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < w; ++c) g.at(r, c) = dc.at(r, offset + c);
    offset += w;
    grads.push_back(std::move(g));
  }
  return grads;
}

double cross_entropy(const Tensor& logits, std::size_t target, double weight) {
  require_rank(logits, 1, "cross_entropy", "logits");
  if (target >= logits.size()) {
    throw DataError("cross_entropy: target " + std::to_string(target) + " out of range for " +
                    std::to_string(logits.size()) + " classes");
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits.data()) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : logits.data()) z += std::exp(v - mx);
  const double log_prob = logits[target] - mx - std::log(z);
  return -weight * log_prob;
}

Tensor cross_entropy_backward(const Tensor& logits, std::size_t target, double weight, double dloss) {
  Tensor g = softmax(logits, 0);
  g[target] -= 1.0;
  g *= weight * dloss;
  return g;
}

}  // namespace sahar::ops
