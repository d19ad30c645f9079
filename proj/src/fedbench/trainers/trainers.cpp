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
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"
#include "fedbench/trainers/trainers.hpp"

namespace fedbench::trainers {

std::string_view to_string(Paradigm paradigm) {
  switch (paradigm) {
    case Paradigm::kCentralized:
      return "centralized";
    case Paradigm::kDistributed:
      return "distributed";
    case Paradigm::kFederated:
      return "federated";
  }
  return "?";
}

Paradigm parse_paradigm(std::string_view name) {
  if (name == "centralized") return Paradigm::kCentralized;
  if (name == "distributed") return Paradigm::kDistributed;
  if (name == "federated") return Paradigm::kFederated;
  throw ConfigError("unknown paradigm '" + std::string(name) +
                    "' (expected centralized|distributed|federated)");
}

void TrainerConfig::validate() const {
  if (participants < 1) throw ConfigError("participants must be >= 1");
  if (!(participation_ratio > 0.0 && participation_ratio <= 1.0)) {
    throw ConfigError("participation ratio must be in (0, 1]");
  }
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (local_epochs < 1) throw ConfigError("local epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::size_t selected_count(std::size_t participants, double ratio) {
  // The epsilon absorbs representation error such as 0.2 * 50.
  const double raw = std::ceil(ratio * static_cast<double>(participants) - 1e-9);
  const auto count = static_cast<std::size_t>(std::max(raw, 1.0));
  return std::min(count, participants);
}

std::vector<std::size_t> sample_clients(std::size_t participants, double ratio,
                                        std::uint64_t seed, std::size_t round) {
  const std::size_t m = selected_count(participants, ratio);
  std::vector<std::size_t> pool(participants);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (m < participants) {
    Rng rng(derive_seed(seed, Stream::kSampling, {round}));
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(pool[i], pool[i + rng.index(participants - i)]);
    }
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
  }
  return pool;
}

models::ParameterVector weighted_average(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw InvalidInput("weighted_average needs at least one update");
  const std::size_t len = updates.front().params.size();
  std::uint64_t total = 0;
  for (const auto& u : updates) {
    if (u.params.size() != len) throw InvalidInput("weighted_average: parameter layouts differ");
    if (u.num_examples == 0) throw InvalidInput("weighted_average: example count must be positive");
    total += u.num_examples;
  }
  models::ParameterVector out(len, 0.0);
  for (const auto& u : updates) {
    const double w = static_cast<double>(u.num_examples) / static_cast<double>(total);
    for (std::size_t j = 0; j < len; ++j) out[j] += w * u.params[j];
  }
  for (std::size_t j = 0; j < len; ++j) {
    double lo = updates.front().params[j];
    double hi = lo;
    for (const auto& u : updates.subspan(1)) {
      lo = std::min(lo, u.params[j]);
      hi = std::max(hi, u.params[j]);
    }
    out[j] = std::clamp(out[j], lo, hi);
  }
  return out;
}

std::uint64_t bytes_per_example(std::size_t dim) { return 8 * static_cast<std::uint64_t>(dim) + 8; }

std::vector<std::size_t> train_probe_rows(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (n <= kTrainProbeSize) return rows;
  Rng rng(derive_seed(seed, Stream::kTrainProbe));
  for (std::size_t i = 0; i < kTrainProbeSize; ++i) {
    std::swap(rows[i], rows[i + rng.index(n - i)]);
  }
  rows.resize(kTrainProbeSize);
  return rows;
}

RoundEvaluation evaluate_round(std::span<const double> global_params,
                               const models::ModelConfig& model, const data::Dataset& full_train,
                               const data::Dataset& test, std::uint64_t seed) {
  const auto rows = train_probe_rows(full_train.size(), seed);
  const auto probe = full_train.subset(rows);
  return {models::evaluate(global_params, model, probe).mean_loss,
          models::evaluate(global_params, model, test).accuracy};
}

std::uint64_t local_training_seed(std::uint64_t seed, std::size_t round,
                                  std::size_t participant) {
  return derive_seed(seed, Stream::kLocalTraining, {round, participant});
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_partition(const TrainerConfig& config, const data::PartitionPlan& partition,
                     const data::Dataset& full_train) {
  if (partition.participants() != config.participants) {
    throw ConfigError("partition has " + std::to_string(partition.participants()) +
                      " participants, config expects " + std::to_string(config.participants));
  }
  for (const auto& list : partition.assignments) {
    if (list.empty()) throw ConfigError("partition assigns no data to a participant");
    for (std::size_t i : list) {
      if (i >= full_train.size()) throw InvalidInput("partition index out of range");
    }
  }
}

// Runs `task(i)` for i in [0, count) on up to `threads` workers. Exceptions
// are rethrown for the lowest failing i.
template <class Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    const std::size_t n = std::min(threads, count);
    workers.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Broadcast -> local training -> weighted aggregation. `sample` selects
// ceil(C p) clients per round; otherwise every participant trains.
std::vector<RoundResult> run_averaging(const TrainerConfig& config,
                                       const models::ModelConfig& model,
                                       const data::PartitionPlan& partition,
                                       const data::Dataset& full_train,
                                       const data::Dataset& test, bool sample) {
  config.validate();
  model.validate();
  check_partition(config, partition, full_train);

  std::vector<data::Dataset> client_data;
  client_data.reserve(partition.participants());
  for (const auto& list : partition.assignments) client_data.push_back(full_train.subset(list));

  const std::uint64_t payload = 8 * static_cast<std::uint64_t>(model.parameter_count());
  auto global = models::init_params(model, derive_seed(config.seed, Stream::kInit));
  std::vector<RoundResult> results;
  results.reserve(config.rounds);

  for (std::size_t round = 1; round <= config.rounds; ++round) {
    const auto start = Clock::now();
    auto active = sample ? sample_clients(config.participants, config.participation_ratio,
                                          config.seed, round)
                         : sample_clients(config.participants, 1.0, config.seed, round);

    std::vector<models::ParameterVector> local(active.size());
    parallel_for(active.size(), config.threads, [&](std::size_t i) {
      const std::size_t client = active[i];
      local[i] = models::train_local(
          global, model, client_data[client],
          {config.local_epochs, config.batch_size, config.lr,
           local_training_seed(config.seed, round, client)});
    });

    std::vector<ClientUpdate> updates;
    updates.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      updates.push_back({local[i], client_data[active[i]].size()});
    }
    global = weighted_average(updates);

    const auto eval = evaluate_round(global, model, full_train, test, config.seed);
    RoundResult r;
    r.round = round;
    r.global_params = global;
    r.train_loss = eval.train_loss;
    r.test_accuracy = eval.test_accuracy;
    r.bytes_up = payload * active.size();
    r.bytes_down = payload * active.size();
    r.active_clients = std::move(active);
    r.wall_ms = elapsed_ms(start);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace

std::vector<RoundResult> run_federated(const TrainerConfig& config,
                                       const models::ModelConfig& model,
                                       const data::PartitionPlan& partition,
                                       const data::Dataset& full_train,
                                       const data::Dataset& test) {
  if (config.paradigm != Paradigm::kFederated) {
    throw ConfigError("run_federated called with a non-federated config");
  }
  return run_averaging(config, model, partition, full_train, test, true);
}

std::vector<RoundResult> run_distributed(const TrainerConfig& config,
                                         const models::ModelConfig& model,
                                         const data::PartitionPlan& partition,
                                         const data::Dataset& full_train,
                                         const data::Dataset& test) {
  if (config.paradigm != Paradigm::kDistributed) {
    throw ConfigError("run_distributed called with a non-distributed config");
  }
  return run_averaging(config, model, partition, full_train, test, false);
}

std::vector<RoundResult> run_centralized(const TrainerConfig& config,
                                         const models::ModelConfig& model,
                                         const data::PartitionPlan& partition,
                                         const data::Dataset& full_train,
                                         const data::Dataset& test) {
  if (config.paradigm != Paradigm::kCentralized) {
    throw ConfigError("run_centralized called with a non-centralized config");
  }
  config.validate();
  model.validate();
  check_partition(config, partition, full_train);
  const std::uint64_t per_example = bytes_per_example(full_train.dim());
  if (config.upload_budget_bytes < per_example) {
    throw ConfigError("upload budget " + std::to_string(config.upload_budget_bytes) +
                      " bytes is below one example (" + std::to_string(per_example) + " bytes)");
  }
  const std::uint64_t quota = config.upload_budget_bytes / per_example;

  std::vector<std::size_t> cursor(config.participants, 0);
  std::vector<std::size_t> pool;
  auto global = models::init_params(model, derive_seed(config.seed, Stream::kInit));
  std::vector<RoundResult> results;
  results.reserve(config.rounds);

  for (std::size_t round = 1; round <= config.rounds; ++round) {
    const auto start = Clock::now();
    std::uint64_t uploaded = 0;
    std::vector<std::size_t> uploaders;
    for (std::size_t k = 0; k < config.participants; ++k) {
      const auto& list = partition.assignments[k];
      const std::size_t take =
          static_cast<std::size_t>(std::min<std::uint64_t>(quota, list.size() - cursor[k]));
      if (take == 0) continue;
      pool.insert(pool.end(), list.begin() + static_cast<std::ptrdiff_t>(cursor[k]),
                  list.begin() + static_cast<std::ptrdiff_t>(cursor[k] + take));
      cursor[k] += take;
      uploaded += take;
      uploaders.push_back(k);
    }

    // The server trains in participant slot 0 of the per-round stream.
    global = models::train_local(global, model, full_train.subset(pool),
                                 {config.local_epochs, config.batch_size, config.lr,
                                  local_training_seed(config.seed, round, 0)});

    const auto eval = evaluate_round(global, model, full_train, test, config.seed);
    RoundResult r;
    r.round = round;
    r.global_params = global;
    r.train_loss = eval.train_loss;
    r.test_accuracy = eval.test_accuracy;
    r.bytes_up = uploaded * per_example;
    r.bytes_down = 0;
    r.active_clients = std::move(uploaders);
    r.wall_ms = elapsed_ms(start);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<RoundResult> run(const TrainerConfig& config, const models::ModelConfig& model,
                             const data::PartitionPlan& partition,
                             const data::Dataset& full_train, const data::Dataset& test) {
  switch (config.paradigm) {
    case Paradigm::kCentralized:
      return run_centralized(config, model, partition, full_train, test);
    case Paradigm::kDistributed:
      return run_distributed(config, model, partition, full_train, test);
    case Paradigm::kFederated:
      return run_federated(config, model, partition, full_train, test);
  }
  throw ConfigError("unknown paradigm");
}

}  // namespace fedbench::trainers
