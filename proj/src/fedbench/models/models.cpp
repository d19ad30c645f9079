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
#include <numeric>
#include <string>

#include "fedbench/error.hpp"
#include "fedbench/models/kernels.hpp"
#include "fedbench/models/models.hpp"
#include "fedbench/rng.hpp"

namespace fedbench::models {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogReg:
      return "logreg";
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kCnnSmall:
      return "cnn-small";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logreg") return ModelKind::kLogReg;
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "cnn-small") return ModelKind::kCnnSmall;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected logreg|mlp|cnn-small)");
}

ImageShape infer_image_shape(std::size_t input_dim) {
  auto square_side = [](std::size_t v) -> std::size_t {
    auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v))));
    return s * s == v ? s : 0;
  };
  if (std::size_t s = square_side(input_dim); s != 0) return {1, s};
  if (input_dim % 3 == 0) {
    if (std::size_t s = square_side(input_dim / 3); s != 0) return {3, s};
  }
  return {};
}

void ModelConfig::validate() const {
  if (input_dim < 1) throw ConfigError("model input_dim must be >= 1");
  if (num_classes < 2) throw ConfigError("model num_classes must be >= 2");
  if (kind == ModelKind::kMlp && hidden_dim < 1) {
    throw ConfigError("mlp hidden_dim must be >= 1");
  }
  if (kind == ModelKind::kCnnSmall) {
    if (conv_channels < 1) throw ConfigError("cnn-small conv_channels must be >= 1");
    const ImageShape shape = infer_image_shape(input_dim);
    if (shape.channels == 0 || shape.side < 4) {
      throw ConfigError("cnn-small needs input_dim = c*s*s with c in {1,3} and s >= 4, got " +
                        std::to_string(input_dim));
    }
  }
}

std::size_t ModelConfig::parameter_count() const {
  const auto k = static_cast<std::size_t>(num_classes);
  switch (kind) {
    case ModelKind::kLogReg:
      return input_dim * k + k;
    case ModelKind::kMlp:
      return input_dim * hidden_dim + hidden_dim + hidden_dim * k + k;
    case ModelKind::kCnnSmall:
      return detail::cnn_parameter_count(*this);
  }
  return 0;
}

namespace {

std::vector<detail::ParamBlock> blocks(const ModelConfig& config) {
  const auto k = static_cast<std::size_t>(config.num_classes);
  const std::size_t d = config.input_dim;
  switch (config.kind) {
    case ModelKind::kLogReg:
      return {{k * d, d, k}, {k, 0, 0}};
    case ModelKind::kMlp: {
      const std::size_t h = config.hidden_dim;
      return {{h * d, d, h}, {h, 0, 0}, {k * h, h, k}, {k, 0, 0}};
    }
    case ModelKind::kCnnSmall:
      return detail::cnn_blocks(config);
  }
  return {};
}

void check_params(std::span<const double> params, const ModelConfig& config) {
  if (params.size() != config.parameter_count()) {
    throw InvalidInput("parameter vector has " + std::to_string(params.size()) +
                       " entries, model expects " + std::to_string(config.parameter_count()));
  }
}

void check_features(const RowMatrix& features, const ModelConfig& config) {
  if (static_cast<std::size_t>(features.cols()) != config.input_dim) {
    throw InvalidInput("feature width " + std::to_string(features.cols()) +
                       " does not match model input_dim " + std::to_string(config.input_dim));
  }
}

void check_batch(const Batch& batch, const ModelConfig& config) {
  check_features(batch.features, config);
  if (batch.labels.empty()) throw InvalidInput("batch must contain at least one example");
  if (static_cast<std::size_t>(batch.features.rows()) != batch.labels.size()) {
    throw InvalidInput("batch has " + std::to_string(batch.features.rows()) + " rows but " +
                       std::to_string(batch.labels.size()) + " labels");
  }
  for (int y : batch.labels) {
    if (y < 0 || y >= config.num_classes) {
      throw InvalidInput("batch label " + std::to_string(y) + " outside [0, " +
                         std::to_string(config.num_classes) + ")");
    }
  }
}

void check_dataset(const data::Dataset& data, const ModelConfig& config) {
  if (data.dim() != config.input_dim) {
    throw InvalidInput("dataset dimension " + std::to_string(data.dim()) +
                       " does not match model input_dim " + std::to_string(config.input_dim));
  }
  if (data.num_classes() > config.num_classes) {
    throw InvalidInput("dataset has more classes than the model");
  }
}

RowMatrix logits_unchecked(std::span<const double> params, const ModelConfig& config,
                           const RowMatrix& features) {
  switch (config.kind) {
    case ModelKind::kLogReg:
      return detail::logreg_logits(params, config, features);
    case ModelKind::kMlp:
      return detail::mlp_logits(params, config, features);
    case ModelKind::kCnnSmall:
      return detail::cnn_logits(params, config, features);
  }
  return {};
}

double loss_grad_unchecked(std::span<const double> params, const ModelConfig& config,
                           const Batch& batch, std::span<double> grad) {
  switch (config.kind) {
    case ModelKind::kLogReg:
      return detail::logreg_loss_grad(params, config, batch, grad);
    case ModelKind::kMlp:
      return detail::mlp_loss_grad(params, config, batch, grad);
    case ModelKind::kCnnSmall:
      return detail::cnn_loss_grad(params, config, batch, grad);
  }
  return 0.0;
}

}  // namespace

ParameterVector init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  ParameterVector params;
  params.reserve(config.parameter_count());
  Rng rng(seed);
  for (const auto& block : blocks(config)) {
    if (block.fan_in == 0) {
      params.insert(params.end(), block.size, 0.0);
      continue;
    }
    const double limit =
        std::sqrt(6.0 / static_cast<double>(block.fan_in + block.fan_out));
    for (std::size_t i = 0; i < block.size; ++i) params.push_back(rng.uniform(-limit, limit));
  }
  return params;
}

RowMatrix predict_logits(std::span<const double> params, const ModelConfig& config,
                         const RowMatrix& features) {
  config.validate();
  check_params(params, config);
  check_features(features, config);
  return logits_unchecked(params, config, features);
}

int argmax(std::span<const double> logits) {
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

double loss(std::span<const double> params, const ModelConfig& config, const Batch& batch) {
  config.validate();
  check_params(params, config);
  check_batch(batch, config);
  return loss_grad_unchecked(params, config, batch, {});
}

double loss_and_gradient(std::span<const double> params, const ModelConfig& config,
                         const Batch& batch, std::span<double> grad) {
  config.validate();
  check_params(params, config);
  check_batch(batch, config);
  if (grad.size() != params.size()) throw InvalidInput("gradient buffer has the wrong size");
  return loss_grad_unchecked(params, config, batch, grad);
}

ParameterVector gradient(std::span<const double> params, const ModelConfig& config,
                         const Batch& batch) {
  ParameterVector grad(params.size(), 0.0);
  loss_and_gradient(params, config, batch, grad);
  return grad;
}

ParameterVector sgd_step(std::span<const double> params, std::span<const double> grad,
                         double lr) {
  if (params.size() != grad.size()) {
    throw InvalidInput("sgd_step: params and gradient lengths differ");
  }
  ParameterVector out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) out[i] = params[i] - lr * grad[i];
  return out;
}

Batch make_batch(const data::Dataset& data, std::span<const std::size_t> rows) {
  Batch batch;
  batch.features.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(data.dim()));
  data.gather(rows, std::span(batch.features.data(), rows.size() * data.dim()));
  batch.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) batch.labels[i] = data.label(rows[i]);
  return batch;
}

Batch make_batch(const data::Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return make_batch(data, rows);
}

ParameterVector train_local(std::span<const double> params, const ModelConfig& config,
                            const data::Dataset& data, const LocalTraining& options) {
  config.validate();
  check_params(params, config);
  check_dataset(data, config);
  if (options.epochs < 1) throw InvalidInput("train_local needs epochs >= 1");
  if (options.batch_size < 1) throw InvalidInput("train_local needs batch_size >= 1");
  if (!(options.lr > 0.0)) throw InvalidInput("train_local needs a positive learning rate");

  const std::size_t n = data.size();
  const std::size_t batch_size = std::min(options.batch_size, n);
  ParameterVector theta(params.begin(), params.end());
  ParameterVector grad(theta.size());
  std::vector<std::size_t> order(n);
  Batch batch;
  batch.features.resize(static_cast<Eigen::Index>(batch_size),
                        static_cast<Eigen::Index>(data.dim()));

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(options.seed, {epoch}));
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t len = std::min(batch_size, n - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      if (static_cast<std::size_t>(batch.features.rows()) != len) {
        batch.features.resize(static_cast<Eigen::Index>(len),
                              static_cast<Eigen::Index>(data.dim()));
      }
      data.gather(rows, std::span(batch.features.data(), len * data.dim()));
      batch.labels.resize(len);
      for (std::size_t i = 0; i < len; ++i) batch.labels[i] = data.label(rows[i]);
      loss_grad_unchecked(theta, config, batch, grad);
      for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= options.lr * grad[j];
    }
  }
  if (!std::all_of(theta.begin(), theta.end(), [](double v) { return std::isfinite(v); })) {
    throw NumericalError("local training diverged (non-finite parameter); lower the learning rate");
  }
  return theta;
}

Evaluation evaluate(std::span<const double> params, const ModelConfig& config,
                    const data::Dataset& data) {
  config.validate();
  check_params(params, config);
  check_dataset(data, config);
  constexpr std::size_t kChunk = 1024;
  const std::size_t n = data.size();
  std::size_t correct = 0;
  double loss_sum = 0.0;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    rows.resize(len);
    std::iota(rows.begin(), rows.end(), start);
    const Batch batch = make_batch(data, rows);
    const RowMatrix z = logits_unchecked(params, config, batch.features);
    for (std::size_t i = 0; i < len; ++i) {
      const auto row = z.row(static_cast<Eigen::Index>(i));
      if (argmax(std::span(row.data(), static_cast<std::size_t>(row.size()))) ==
          batch.labels[i]) {
        ++correct;
      }
    }
    loss_sum += detail::softmax_cross_entropy(z, batch.labels, nullptr) * static_cast<double>(len);
  }
  return {static_cast<double>(correct) / static_cast<double>(n),
          loss_sum / static_cast<double>(n)};
}

}  // namespace fedbench::models
