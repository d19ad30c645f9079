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

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedbench/data/data.hpp"

namespace fedbench::models {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Flat float64 vector of every trainable parameter; the layout is fixed by
// the ModelConfig that produced it.
using ParameterVector = std::vector<double>;

enum class ModelKind { kLogReg, kMlp, kCnnSmall };

std::string_view to_string(ModelKind kind);
// Accepts "logreg", "mlp", "cnn-small". Throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view name);

struct ModelConfig {
  ModelKind kind = ModelKind::kLogReg;
  std::size_t input_dim = 1;
  int num_classes = 2;
  std::size_t hidden_dim = 64;    // mlp
  std::size_t conv_channels = 8;  // cnn-small: first conv width, second is 2x

  // Throws ConfigError on an inconsistent config.
  void validate() const;
  std::size_t parameter_count() const;
};

// Image geometry the cnn-small kind infers from input_dim = channels*side^2.
struct ImageShape {
  std::size_t channels = 0;
  std::size_t side = 0;
};
ImageShape infer_image_shape(std::size_t input_dim);

struct Batch {
  RowMatrix features;       // [b x input_dim]
  std::vector<int> labels;  // [b]
};

// Glorot-uniform weights, zero biases. Deterministic in (config, seed).
ParameterVector init_params(const ModelConfig& config, std::uint64_t seed);

// [b x num_classes] logits. Throws InvalidInput on a dimension mismatch.
RowMatrix predict_logits(std::span<const double> params, const ModelConfig& config,
                         const RowMatrix& features);

// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> logits);

// Mean softmax cross-entropy over the batch.
double loss(std::span<const double> params, const ModelConfig& config, const Batch& batch);

// d loss / d params, same layout as params.
ParameterVector gradient(std::span<const double> params, const ModelConfig& config,
                         const Batch& batch);

// Both at once; `grad` must have parameter_count() entries.
double loss_and_gradient(std::span<const double> params, const ModelConfig& config,
                         const Batch& batch, std::span<double> grad);

// params - lr * grad.
ParameterVector sgd_step(std::span<const double> params, std::span<const double> grad,
                         double lr);

struct LocalTraining {
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  double lr = 0.05;
  std::uint64_t seed = 0;
};

// `epochs` passes of mini-batch SGD over `data`, reshuffled each epoch with a
// seed derived from (seed, epoch). The last batch of an epoch may be short.
// A batch size at or above |data| means full-batch steps.
ParameterVector train_local(std::span<const double> params, const ModelConfig& config,
                            const data::Dataset& data, const LocalTraining& options);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

Evaluation evaluate(std::span<const double> params, const ModelConfig& config,
                    const data::Dataset& data);

// Builds a batch from rows of `data`.
Batch make_batch(const data::Dataset& data, std::span<const std::size_t> rows);
Batch make_batch(const data::Dataset& data);

}  // namespace fedbench::models
