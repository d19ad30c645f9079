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

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <string>

#include "fedbench/error.hpp"
#include "fedbench/harness/harness.hpp"
#include "fedbench/rng.hpp"

namespace fedbench::harness {
namespace {

std::filesystem::path pick_subdir(const std::filesystem::path& dir, const char* probe,
                                  std::initializer_list<const char*> subdirs) {
  if (std::filesystem::exists(dir / probe)) return dir;
  for (const char* sub : subdirs) {
    if (std::filesystem::exists(dir / sub / probe)) return dir / sub;
  }
  return dir;
}

data::Dataset desk_subsample(const data::Dataset& full, std::size_t size, std::uint64_t seed,
                             std::uint64_t which) {
  std::vector<std::size_t> rows(full.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (full.size() <= size) return full.subset(rows);
  Rng rng(derive_seed(seed, Stream::kDeskSubsample, {which}));
  for (std::size_t i = 0; i < size; ++i) std::swap(rows[i], rows[i + rng.index(full.size() - i)]);
  rows.resize(size);
  return full.subset(rows);
}

template <class E>
bool rethrow_as(const Error& e, const std::string& prefix) {
  if (dynamic_cast<const E*>(&e) != nullptr) throw E(prefix + e.what());
  return false;
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& run_id) {
  const std::string prefix = run_id + ": ";
  rethrow_as<IoError>(e, prefix) || rethrow_as<FormatError>(e, prefix) ||
      rethrow_as<ConfigError>(e, prefix) || rethrow_as<InvalidInput>(e, prefix) ||
      rethrow_as<NumericalError>(e, prefix);
  throw Error(prefix + e.what());
}

void write_meta(const ExperimentConfig& config, const ExperimentSummary& summary) {
  std::ofstream out(config.meta_path());
  if (!out) throw IoError("cannot open " + config.meta_path().string() + " for writing");
  for (const auto& [k, v] : config.echo()) out << k << '=' << v << '\n';
  char line[128];
  std::snprintf(line, sizeof line, "final_accuracy=%.6g\nbest_accuracy=%.6g\n",
                summary.final_accuracy, summary.best.accuracy);
  out << line << "best_round=" << summary.best.round << '\n'
      << "total_bytes_up=" << summary.bytes.up << '\n'
      << "total_bytes_down=" << summary.bytes.down << '\n';
  if (!out) throw IoError("write failed for " + config.meta_path().string());
}

}  // namespace

std::filesystem::path resolve_data_dir(const std::filesystem::path& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("FEDBENCH_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "data";
}

data::Split DataCache::get(const ExperimentConfig& config) {
  const std::uint64_t seed = config.trainer.seed;
  if (config.dataset == DatasetKind::kSynthetic) {
    const bool desk = config.scale == Scale::kDesk;
    return {data::generate_synthetic(desk ? kDeskTrainSize : 60000, kSyntheticDim,
                                     kSyntheticClasses, kSyntheticSeparation,
                                     derive_seed(seed, Stream::kSyntheticTrain)),
            data::generate_synthetic(desk ? kDeskTestSize : 10000, kSyntheticDim,
                                     kSyntheticClasses, kSyntheticSeparation,
                                     derive_seed(seed, Stream::kSyntheticTest))};
  }

  const auto dir = resolve_data_dir(config.data_dir);
  const std::string key = std::string(to_string(config.dataset)) + "|" + dir.string();
  auto it = full_.find(key);
  if (it == full_.end()) {
    data::Split split =
        config.dataset == DatasetKind::kMnist
            ? data::load_mnist(pick_subdir(dir, "train-images-idx3-ubyte", {"mnist", "MNIST"}))
            : data::load_cifar10(
                  pick_subdir(dir, "data_batch_1.bin", {"cifar-10-batches-bin", "cifar10"}));
    it = full_.emplace(key, std::move(split)).first;
  }
  if (config.scale == Scale::kPaper) return it->second;
  return {desk_subsample(it->second.train, kDeskTrainSize, seed, 0),
          desk_subsample(it->second.test, kDeskTestSize, seed, 1)};
}

ExperimentResult run_experiment(const ExperimentConfig& config, DataCache& cache,
                                const RunOptions& options) {
  const std::string id = config.run_id();
  try {
    config.validate();
    // Data pre-processing.
    const data::Split split = cache.get(config);
    // Network architecture.
    if (split.train.dim() != config.model.input_dim) {
      throw ConfigError("dataset dimension " + std::to_string(split.train.dim()) +
                        " does not match model input_dim " +
                        std::to_string(config.model.input_dim));
    }
    // Model training.
    const std::uint64_t partition_seed = derive_seed(config.trainer.seed, Stream::kPartition);
    const data::PartitionPlan plan =
        config.partition == data::PartitionScheme::kIid
            ? data::partition_iid(split.train, config.trainer.participants, partition_seed)
            : data::partition_shards(split.train, config.trainer.participants,
                                     config.shards_per_client, partition_seed);
    const auto rounds = trainers::run(config.trainer, config.model, plan, split.train, split.test);

    // Model testing.
    ExperimentResult result;
    result.curve = metrics::make_curve(id, config.echo(), rounds);
    auto& s = result.summary;
    s.run_id = id;
    s.csv_path = config.csv_path();
    s.final_accuracy = result.curve.records.back().test_accuracy;
    s.best = metrics::best_accuracy(result.curve);
    s.bytes = metrics::cumulative_bytes(result.curve);
    s.param_count = config.model.parameter_count();

    if (options.write_files) {
      std::error_code ec;
      std::filesystem::create_directories(config.out_dir, ec);
      if (ec) {
        throw IoError("cannot create output directory " + config.out_dir.string() + ": " +
                      ec.message());
      }
      metrics::export_csv(result.curve, s.csv_path);
      write_meta(config, s);
    }
    return result;
  } catch (const Error& e) {
    rethrow_with_context(e, id);
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  DataCache cache;
  return run_experiment(config, cache);
}

}  // namespace fedbench::harness
