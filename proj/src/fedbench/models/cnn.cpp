/*
 * Copyright 2026 The fedbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cstring>
#include <vector>

#include "fedbench/models/kernels.hpp"

// cnn-small: conv3x3(pad 1) -> ReLU -> maxpool2 -> conv3x3(pad 1) -> ReLU ->
// maxpool2 -> dense. Tensors are channel-major [c][row][col].
namespace fedbench::models::detail {
namespace {

struct Geometry {
  std::size_t in_channels;
  std::size_t side;
  std::size_t c1;
  std::size_t c2;
  std::size_t side1;  // after first pool
  std::size_t side2;  // after second pool
  std::size_t flat;
  std::size_t classes;

  explicit Geometry(const ModelConfig& config) {
    const ImageShape shape = infer_image_shape(config.input_dim);
    in_channels = shape.channels;
    side = shape.side;
    c1 = config.conv_channels;
    c2 = 2 * config.conv_channels;
    side1 = side / 2;
    side2 = side1 / 2;
    flat = c2 * side2 * side2;
    classes = static_cast<std::size_t>(config.num_classes);
  }

  std::size_t w1_size() const { return c1 * in_channels * 9; }
  std::size_t w2_size() const { return c2 * c1 * 9; }
  std::size_t wd_size() const { return classes * flat; }
};

struct Offsets {
  std::size_t w1, b1, w2, b2, wd, bd, end;
  explicit Offsets(const Geometry& g) {
    w1 = 0;
    b1 = w1 + g.w1_size();
    w2 = b1 + g.c1;
    b2 = w2 + g.w2_size();
    wd = b2 + g.c2;
    bd = wd + g.wd_size();
    end = bd + g.classes;
  }
};

// out[co] = b[co] + sum_ci W[co][ci] * in[ci], 3x3, zero padding.
void conv_forward(const double* in, std::size_t cin, std::size_t side, const double* w,
                  const double* b, std::size_t cout, double* out) {
  const auto s = static_cast<long>(side);
  for (std::size_t co = 0; co < cout; ++co) {
    double* o = out + co * side * side;
    std::fill(o, o + side * side, b[co]);
    for (std::size_t ci = 0; ci < cin; ++ci) {
      const double* x = in + ci * side * side;
      const double* k = w + (co * cin + ci) * 9;
      for (long r = 0; r < s; ++r) {
        for (long c = 0; c < s; ++c) {
          double acc = 0.0;
          for (long dr = -1; dr <= 1; ++dr) {
            const long rr = r + dr;
            if (rr < 0 || rr >= s) continue;
            for (long dc = -1; dc <= 1; ++dc) {
              const long cc = c + dc;
              if (cc < 0 || cc >= s) continue;
              acc += k[(dr + 1) * 3 + (dc + 1)] * x[rr * s + cc];
            }
          }
          o[r * s + c] += acc;
        }
      }
    }
  }
}

// Accumulates dW, db and (if din != nullptr) din from dout.
void conv_backward(const double* in, std::size_t cin, std::size_t side, const double* w,
                   const double* dout, std::size_t cout, double* dw, double* db,
                   double* din) {
  const auto s = static_cast<long>(side);
  for (std::size_t co = 0; co < cout; ++co) {
    const double* go = dout + co * side * side;
    for (std::size_t i = 0; i < side * side; ++i) db[co] += go[i];
    for (std::size_t ci = 0; ci < cin; ++ci) {
      const double* x = in + ci * side * side;
      const double* k = w + (co * cin + ci) * 9;
      double* gk = dw + (co * cin + ci) * 9;
      double* gx = din != nullptr ? din + ci * side * side : nullptr;
      for (long r = 0; r < s; ++r) {
        for (long c = 0; c < s; ++c) {
          const double g = go[r * s + c];
          if (g == 0.0) continue;
          for (long dr = -1; dr <= 1; ++dr) {
            const long rr = r + dr;
            if (rr < 0 || rr >= s) continue;
            for (long dc = -1; dc <= 1; ++dc) {
              const long cc = c + dc;
              if (cc < 0 || cc >= s) continue;
              const long t = (dr + 1) * 3 + (dc + 1);
              gk[t] += g * x[rr * s + cc];
              if (gx != nullptr) gx[rr * s + cc] += g * k[t];
            }
          }
        }
      }
    }
  }
}

void relu(double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], 0.0);
}

// 2x2 stride-2 max pool with floor semantics; `arg` records the winning
// input offset for each output (first max in row-major scan order).
void pool_forward(const double* in, std::size_t channels, std::size_t side, double* out,
                  std::size_t* arg) {
  const std::size_t half = side / 2;
  for (std::size_t ch = 0; ch < channels; ++ch) {
    const double* x = in + ch * side * side;
    for (std::size_t r = 0; r < half; ++r) {
      for (std::size_t c = 0; c < half; ++c) {
        std::size_t best = (2 * r) * side + 2 * c;
        for (std::size_t dr = 0; dr < 2; ++dr) {
          for (std::size_t dc = 0; dc < 2; ++dc) {
            const std::size_t at = (2 * r + dr) * side + 2 * c + dc;
            if (x[at] > x[best]) best = at;
          }
        }
        const std::size_t o = ch * half * half + r * half + c;
        out[o] = x[best];
        arg[o] = ch * side * side + best;
      }
    }
  }
}

struct Activations {
  std::vector<double> a1, p1, a2, p2;
  std::vector<std::size_t> arg1, arg2;

  explicit Activations(const Geometry& g)
      : a1(g.c1 * g.side * g.side),
        p1(g.c1 * g.side1 * g.side1),
        a2(g.c2 * g.side1 * g.side1),
        p2(g.flat),
        arg1(p1.size()),
        arg2(p2.size()) {}
};

void forward_one(const Geometry& g, const Offsets& off, const double* p, const double* x,
                 Activations& act, double* logits) {
  conv_forward(x, g.in_channels, g.side, p + off.w1, p + off.b1, g.c1, act.a1.data());
  relu(act.a1.data(), act.a1.size());
  pool_forward(act.a1.data(), g.c1, g.side, act.p1.data(), act.arg1.data());
  conv_forward(act.p1.data(), g.c1, g.side1, p + off.w2, p + off.b2, g.c2, act.a2.data());
  relu(act.a2.data(), act.a2.size());
  pool_forward(act.a2.data(), g.c2, g.side1, act.p2.data(), act.arg2.data());
  for (std::size_t c = 0; c < g.classes; ++c) {
    const double* w = p + off.wd + c * g.flat;
    double acc = p[off.bd + c];
    for (std::size_t j = 0; j < g.flat; ++j) acc += w[j] * act.p2[j];
    logits[c] = acc;
  }
}

}  // namespace

std::size_t cnn_parameter_count(const ModelConfig& config) {
  return Offsets(Geometry(config)).end;
}

std::vector<ParamBlock> cnn_blocks(const ModelConfig& config) {
  const Geometry g(config);
  return {
      {g.w1_size(), g.in_channels * 9, g.c1 * 9},
      {g.c1, 0, 0},
      {g.w2_size(), g.c1 * 9, g.c2 * 9},
      {g.c2, 0, 0},
      {g.wd_size(), g.flat, g.classes},
      {g.classes, 0, 0},
  };
}

RowMatrix cnn_logits(std::span<const double> params, const ModelConfig& config,
                     const RowMatrix& x) {
  const Geometry g(config);
  const Offsets off(g);
  RowMatrix z(x.rows(), static_cast<Eigen::Index>(g.classes));
  Activations act(g);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    forward_one(g, off, params.data(), x.row(i).data(), act, z.row(i).data());
  }
  return z;
}

double cnn_loss_grad(std::span<const double> params, const ModelConfig& config,
                     const Batch& batch, std::span<double> grad) {
  const Geometry g(config);
  const Offsets off(g);
  const Eigen::Index b = batch.features.rows();
  RowMatrix z(b, static_cast<Eigen::Index>(g.classes));
  std::vector<Activations> acts(static_cast<std::size_t>(b), Activations(g));
  for (Eigen::Index i = 0; i < b; ++i) {
    forward_one(g, off, params.data(), batch.features.row(i).data(),
                acts[static_cast<std::size_t>(i)], z.row(i).data());
  }
  if (grad.empty()) return softmax_cross_entropy(z, batch.labels, nullptr);

  RowMatrix dz;
  const double value = softmax_cross_entropy(z, batch.labels, &dz);
  std::fill(grad.begin(), grad.end(), 0.0);
  const double* p = params.data();
  double* gp = grad.data();

  std::vector<double> dp2(g.flat), da2(g.c2 * g.side1 * g.side1), dp1(g.c1 * g.side1 * g.side1),
      da1(g.c1 * g.side * g.side);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Activations& act = acts[static_cast<std::size_t>(i)];
    std::fill(dp2.begin(), dp2.end(), 0.0);
    for (std::size_t c = 0; c < g.classes; ++c) {
      const double gz = dz(i, static_cast<Eigen::Index>(c));
      gp[off.bd + c] += gz;
      const double* w = p + off.wd + c * g.flat;
      double* gw = gp + off.wd + c * g.flat;
      for (std::size_t j = 0; j < g.flat; ++j) {
        gw[j] += gz * act.p2[j];
        dp2[j] += gz * w[j];
      }
    }
    std::fill(da2.begin(), da2.end(), 0.0);
    for (std::size_t j = 0; j < dp2.size(); ++j) {
      if (act.a2[act.arg2[j]] > 0.0) da2[act.arg2[j]] += dp2[j];
    }
    std::fill(dp1.begin(), dp1.end(), 0.0);
    conv_backward(act.p1.data(), g.c1, g.side1, p + off.w2, da2.data(), g.c2, gp + off.w2,
                  gp + off.b2, dp1.data());
    std::fill(da1.begin(), da1.end(), 0.0);
    for (std::size_t j = 0; j < dp1.size(); ++j) {
      if (act.a1[act.arg1[j]] > 0.0) da1[act.arg1[j]] += dp1[j];
    }
    conv_backward(batch.features.row(i).data(), g.in_channels, g.side, p + off.w1, da1.data(),
                  g.c1, gp + off.w1, gp + off.b1, nullptr);
  }
  return value;
}

}  // namespace fedbench::models::detail
