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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedbench/data/data.hpp"
#include "fedbench/metrics/metrics.hpp"
#include "fedbench/models/models.hpp"
#include "fedbench/trainers/trainers.hpp"

namespace fedbench::harness {

enum class DatasetKind { kMnist, kCifar10, kSynthetic };
enum class Scale { kPaper, kDesk };

std::string_view to_string(DatasetKind kind);
std::string_view to_string(Scale scale);
std::string_view to_string(data::PartitionScheme scheme);
DatasetKind parse_dataset(std::string_view name);
Scale parse_scale(std::string_view name);
data::PartitionScheme parse_partition(std::string_view name);

inline constexpr std::size_t kDeskTrainSize = 6000;
inline constexpr std::size_t kDeskTestSize = 1000;
// Centralized default: this many examples per participant per round.
inline constexpr std::size_t kDefaultBudgetExamples = 25;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Synthetic stand-in used when dataset = synthetic.
inline constexpr std::size_t kSyntheticDim = 20;
inline constexpr int kSyntheticClasses = 10;
inline constexpr double kSyntheticSeparation = 4.0;

struct DatasetShape {
  std::size_t dim;
  int classes;
};
DatasetShape shape_of(DatasetKind kind);

struct ExperimentConfig {
  int scenario = 0;  // 0 = ad hoc run
  DatasetKind dataset = DatasetKind::kMnist;
  models::ModelConfig model;
  trainers::TrainerConfig trainer;
  data::PartitionScheme partition = data::PartitionScheme::kShards;
  std::size_t shards_per_client = 2;
  Scale scale = Scale::kDesk;
  std::filesystem::path data_dir;  // empty: $FEDBENCH_DATA_DIR, else ./data
  std::filesystem::path out_dir = "results";

  // e.g. "s1_mnist_federated_desk_seed42"; scenario 3 adds "_p20".
  std::string run_id() const;
  std::filesystem::path csv_path() const;
  std::filesystem::path meta_path() const;
  std::vector<std::pair<std::string, std::string>> echo() const;
  // Throws ConfigError.
  void validate() const;
};

// The three comparison scenarios. Scenario 1: p=50, C=0.2, R=100.
// Scenario 2: as 1 with R=200. Scenario 3: p in {20,40,60,80,100}, C=0.2,
// R=100. Distributed and federated use E=10; the centralized server runs one
// epoch over its pool per round. Desk scale halves R and subsamples data to
// 6000 train / 1000 test rows. Throws ConfigError for any other id.
std::vector<ExperimentConfig> scenario(int id, DatasetKind dataset,
                                       trainers::Paradigm paradigm, Scale scale);

// Flat key=value settings mirroring the CLI long flags (without "--").
using Settings = std::map<std::string, std::string, std::less<>>;

const std::vector<std::string_view>& setting_keys();
// Throws ConfigError for an unknown key.
void set_setting(Settings& settings, std::string_view key, std::string_view value);
// Reads key=value lines; '#' starts a comment. Throws IoError/ConfigError.
void parse_settings(std::istream& in, Settings& settings, std::string_view origin);
void load_settings_file(const std::filesystem::path& path, Settings& settings);

// Expands `scenario` (default: an ad hoc run seeded from scenario 1's
// values) and applies every explicit setting on top.
std::vector<ExperimentConfig> resolve(const Settings& settings);

// Loaded datasets keyed by (dataset, data dir); desk subsamples are views.
class DataCache {
 public:
  data::Split get(const ExperimentConfig& config);

 private:
  std::map<std::string, data::Split> full_;
};

std::filesystem::path resolve_data_dir(const std::filesystem::path& configured);

struct ExperimentSummary {
  std::string run_id;
  std::filesystem::path csv_path;
  double final_accuracy = 0.0;
  metrics::BestAccuracy best;
  metrics::ByteTotals bytes;
  std::size_t param_count = 0;
};

struct ExperimentResult {
  metrics::ConvergenceCurve curve;
  ExperimentSummary summary;
};

struct RunOptions {
  bool write_files = true;
};

// Pre-process data, build the model, train, test; writes <run_id>.csv and
// <run_id>.meta under out_dir. Errors carry the run id as context.
ExperimentResult run_experiment(const ExperimentConfig& config, DataCache& cache,
                                const RunOptions& options = {});
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace fedbench::harness
