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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedbench/data/data.hpp"
#include "fedbench/models/models.hpp"

namespace fedbench::trainers {

enum class Paradigm { kCentralized, kDistributed, kFederated };

std::string_view to_string(Paradigm paradigm);
// Accepts "centralized", "distributed", "federated". Throws ConfigError.
Paradigm parse_paradigm(std::string_view name);

struct TrainerConfig {
  Paradigm paradigm = Paradigm::kFederated;
  std::size_t participants = 1;
  double participation_ratio = 1.0;
  std::size_t rounds = 1;
  std::size_t local_epochs = 1;
  std::size_t batch_size = 32;
  double lr = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t upload_budget_bytes = 0;  // centralized only, per participant per round
  // Worker threads for client-local training. Results do not depend on it.
  std::size_t threads = 1;

  // Throws ConfigError.
  void validate() const;
};

struct RoundResult {
  std::size_t round = 0;
  models::ParameterVector global_params;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  std::vector<std::size_t> active_clients;
  double wall_ms = 0.0;
};

// ceil(C * p), clamped to [1, p].
std::size_t selected_count(std::size_t participants, double ratio);

// selected_count(p, C) distinct clients drawn uniformly without replacement
// from a stream keyed by (seed, round); sorted ascending.
std::vector<std::size_t> sample_clients(std::size_t participants, double ratio,
                                        std::uint64_t seed, std::size_t round);

struct ClientUpdate {
  std::span<const double> params;
  std::size_t num_examples = 0;
};

// sum_i n_i * params_i / sum_i n_i, accumulated in list order. Each output
// coordinate is kept inside [min_i, max_i] of the inputs. Throws InvalidInput
// on an empty list, a zero count, or mismatched lengths.
models::ParameterVector weighted_average(std::span<const ClientUpdate> updates);

// Bytes one example costs to upload: 8 per feature plus 8 for the label.
std::uint64_t bytes_per_example(std::size_t dim);

constexpr std::size_t kTrainProbeSize = 1000;

struct RoundEvaluation {
  double train_loss = 0.0;
  double test_accuracy = 0.0;
};

// Test accuracy on `test` and mean loss on a fixed seeded subsample of
// `full_train` (kTrainProbeSize rows, or all of it when smaller).
RoundEvaluation evaluate_round(std::span<const double> global_params,
                               const models::ModelConfig& model, const data::Dataset& full_train,
                               const data::Dataset& test, std::uint64_t seed);

// The rows evaluate_round scores train loss on.
std::vector<std::size_t> train_probe_rows(std::size_t n, std::uint64_t seed);

// Shared by every paradigm: the seed a participant's local training uses in
// a given round.
std::uint64_t local_training_seed(std::uint64_t seed, std::size_t round,
                                  std::size_t participant);

std::vector<RoundResult> run_federated(const TrainerConfig& config,
                                       const models::ModelConfig& model,
                                       const data::PartitionPlan& partition,
                                       const data::Dataset& full_train,
                                       const data::Dataset& test);

std::vector<RoundResult> run_distributed(const TrainerConfig& config,
                                         const models::ModelConfig& model,
                                         const data::PartitionPlan& partition,
                                         const data::Dataset& full_train,
                                         const data::Dataset& test);

std::vector<RoundResult> run_centralized(const TrainerConfig& config,
                                         const models::ModelConfig& model,
                                         const data::PartitionPlan& partition,
                                         const data::Dataset& full_train,
                                         const data::Dataset& test);

// Dispatches on config.paradigm.
std::vector<RoundResult> run(const TrainerConfig& config, const models::ModelConfig& model,
                             const data::PartitionPlan& partition,
                             const data::Dataset& full_train, const data::Dataset& test);

}  // namespace fedbench::trainers
