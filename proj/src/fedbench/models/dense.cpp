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
#include <cmath>

#include "fedbench/models/kernels.hpp"

namespace fedbench::models::detail {

double softmax_cross_entropy(const RowMatrix& logits, std::span<const int> labels,
                             RowMatrix* dlogits) {
  const Eigen::Index b = logits.rows();
  const Eigen::Index k = logits.cols();
  const double inv_b = 1.0 / static_cast<double>(b);
  if (dlogits != nullptr) dlogits->resize(b, k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const double m = logits.row(i).maxCoeff();
    double s = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) s += std::exp(logits(i, c) - m);
    const double lse = m + std::log(s);
    const int y = labels[static_cast<std::size_t>(i)];
    total += lse - logits(i, y);
    if (dlogits != nullptr) {
      for (Eigen::Index c = 0; c < k; ++c) {
        (*dlogits)(i, c) = std::exp(logits(i, c) - lse) * inv_b;
      }
      (*dlogits)(i, y) -= inv_b;
    }
  }
  return total * inv_b;
}

namespace {

// Parameters live in plain std::vector storage whose alignment varies between
// allocations, and Eigen picks vectorized paths by alignment. Working on owned
// copies keeps results bitwise reproducible.
RowMatrix owned(const double* p, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const RowMatrix>(p, rows, cols);
}

Eigen::VectorXd owned(const double* p, Eigen::Index n) {
  return Eigen::Map<const Eigen::VectorXd>(p, n);
}

void store(const RowMatrix& m, double* out) { std::copy_n(m.data(), m.size(), out); }

void store(const Eigen::VectorXd& v, double* out) { std::copy_n(v.data(), v.size(), out); }

}  // namespace

RowMatrix logreg_logits(std::span<const double> params, const ModelConfig& config,
                        const RowMatrix& x) {
  const auto d = static_cast<Eigen::Index>(config.input_dim);
  const auto k = static_cast<Eigen::Index>(config.num_classes);
  const RowMatrix w = owned(params.data(), k, d);
  const Eigen::VectorXd b = owned(params.data() + k * d, k);
  RowMatrix z = x * w.transpose();
  z.rowwise() += b.transpose();
  return z;
}

double logreg_loss_grad(std::span<const double> params, const ModelConfig& config,
                        const Batch& batch, std::span<double> grad) {
  const RowMatrix z = logreg_logits(params, config, batch.features);
  if (grad.empty()) return softmax_cross_entropy(z, batch.labels, nullptr);

  RowMatrix dz;
  const double value = softmax_cross_entropy(z, batch.labels, &dz);
  const auto d = static_cast<Eigen::Index>(config.input_dim);
  const auto k = static_cast<Eigen::Index>(config.num_classes);
  const RowMatrix gw = dz.transpose() * batch.features;
  const Eigen::VectorXd gb = dz.colwise().sum().transpose();
  store(gw, grad.data());
  store(gb, grad.data() + k * d);
  return value;
}

// Layout: W1 [h x d], b1 [h], W2 [k x h], b2 [k].
RowMatrix mlp_logits(std::span<const double> params, const ModelConfig& config,
                     const RowMatrix& x) {
  const auto d = static_cast<Eigen::Index>(config.input_dim);
  const auto h = static_cast<Eigen::Index>(config.hidden_dim);
  const auto k = static_cast<Eigen::Index>(config.num_classes);
  const double* p = params.data();
  const RowMatrix w1 = owned(p, h, d);
  const Eigen::VectorXd b1 = owned(p + h * d, h);
  const RowMatrix w2 = owned(p + h * d + h, k, h);
  const Eigen::VectorXd b2 = owned(p + h * d + h + k * h, k);

  RowMatrix hidden = x * w1.transpose();
  hidden.rowwise() += b1.transpose();
  hidden = hidden.cwiseMax(0.0);
  RowMatrix z = hidden * w2.transpose();
  z.rowwise() += b2.transpose();
  return z;
}

double mlp_loss_grad(std::span<const double> params, const ModelConfig& config,
                     const Batch& batch, std::span<double> grad) {
  const auto d = static_cast<Eigen::Index>(config.input_dim);
  const auto h = static_cast<Eigen::Index>(config.hidden_dim);
  const auto k = static_cast<Eigen::Index>(config.num_classes);
  const double* p = params.data();
  const RowMatrix w1 = owned(p, h, d);
  const Eigen::VectorXd b1 = owned(p + h * d, h);
  const RowMatrix w2 = owned(p + h * d + h, k, h);
  const Eigen::VectorXd b2 = owned(p + h * d + h + k * h, k);

  RowMatrix pre = batch.features * w1.transpose();
  pre.rowwise() += b1.transpose();
  const RowMatrix hidden = pre.cwiseMax(0.0);
  RowMatrix z = hidden * w2.transpose();
  z.rowwise() += b2.transpose();
  if (grad.empty()) return softmax_cross_entropy(z, batch.labels, nullptr);

  RowMatrix dz;
  const double value = softmax_cross_entropy(z, batch.labels, &dz);

  double* g = grad.data();
  store(RowMatrix(dz.transpose() * hidden), g + h * d + h);
  store(Eigen::VectorXd(dz.colwise().sum().transpose()), g + h * d + h + k * h);
  RowMatrix dhidden = dz * w2;
  dhidden = (pre.array() > 0.0).select(dhidden, 0.0);
  store(RowMatrix(dhidden.transpose() * batch.features), g);
  store(Eigen::VectorXd(dhidden.colwise().sum().transpose()), g + h * d);
  return value;
}

}  // namespace fedbench::models::detail
