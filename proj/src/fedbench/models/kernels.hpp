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

#pragma once

#include <span>

#include "fedbench/models/models.hpp"

// Per-kind forward/backward passes. Callers validate shapes first.
namespace fedbench::models::detail {

// Mean cross-entropy of softmax(logits) against labels. When `dlogits` is
// non-null it receives d(mean loss)/d(logits).
double softmax_cross_entropy(const RowMatrix& logits, std::span<const int> labels,
                             RowMatrix* dlogits);

RowMatrix logreg_logits(std::span<const double> params, const ModelConfig& config,
                        const RowMatrix& x);
double logreg_loss_grad(std::span<const double> params, const ModelConfig& config,
                        const Batch& batch, std::span<double> grad);

RowMatrix mlp_logits(std::span<const double> params, const ModelConfig& config,
                     const RowMatrix& x);
double mlp_loss_grad(std::span<const double> params, const ModelConfig& config,
                     const Batch& batch, std::span<double> grad);

RowMatrix cnn_logits(std::span<const double> params, const ModelConfig& config,
                     const RowMatrix& x);
double cnn_loss_grad(std::span<const double> params, const ModelConfig& config,
                     const Batch& batch, std::span<double> grad);

std::size_t cnn_parameter_count(const ModelConfig& config);
// (fan_in, fan_out, count) per weight block followed by a bias count, in
// parameter-vector order.
struct ParamBlock {
  std::size_t size;
  std::size_t fan_in;   // 0 for biases
  std::size_t fan_out;  // 0 for biases
};
std::vector<ParamBlock> cnn_blocks(const ModelConfig& config);

}  // namespace fedbench::models::detail
