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

#include <string>

#include "fedbench/error.hpp"
#include "fedbench/harness/harness.hpp"

namespace fedbench::harness {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist:
      return "mnist";
    case DatasetKind::kCifar10:
      return "cifar10";
    case DatasetKind::kSynthetic:
      return "synthetic";
  }
  return "?";
}

std::string_view to_string(Scale scale) { return scale == Scale::kPaper ? "paper" : "desk"; }

std::string_view to_string(data::PartitionScheme scheme) {
  return scheme == data::PartitionScheme::kIid ? "iid" : "shards";
}

DatasetKind parse_dataset(std::string_view name) {
  if (name == "mnist") return DatasetKind::kMnist;
  if (name == "cifar10") return DatasetKind::kCifar10;
  if (name == "synthetic") return DatasetKind::kSynthetic;
  throw ConfigError("unknown dataset '" + std::string(name) +
                    "' (expected mnist|cifar10|synthetic)");
}

Scale parse_scale(std::string_view name) {
  if (name == "paper") return Scale::kPaper;
  if (name == "desk") return Scale::kDesk;
  throw ConfigError("unknown scale '" + std::string(name) + "' (expected paper|desk)");
}

data::PartitionScheme parse_partition(std::string_view name) {
  if (name == "iid") return data::PartitionScheme::kIid;
  if (name == "shards") return data::PartitionScheme::kShards;
  throw ConfigError("unknown partition '" + std::string(name) + "' (expected iid|shards)");
}

DatasetShape shape_of(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist:
      return {784, 10};
    case DatasetKind::kCifar10:
      return {3072, 10};
    case DatasetKind::kSynthetic:
      return {kSyntheticDim, kSyntheticClasses};
  }
  return {0, 0};
}

std::string ExperimentConfig::run_id() const {
  std::string id = scenario == 0 ? std::string("custom") : "s" + std::to_string(scenario);
  id += "_";
  id += to_string(dataset);
  id += "_";
  id += trainers::to_string(trainer.paradigm);
  if (scenario == 3) id += "_p" + std::to_string(trainer.participants);
  id += "_";
  id += to_string(scale);
  id += "_seed" + std::to_string(trainer.seed);
  return id;
}

std::filesystem::path ExperimentConfig::csv_path() const { return out_dir / (run_id() + ".csv"); }

std::filesystem::path ExperimentConfig::meta_path() const {
  return out_dir / (run_id() + ".meta");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  auto num = [](auto v) { return std::to_string(v); };
  char lr_text[32];
  std::snprintf(lr_text, sizeof lr_text, "%.17g", trainer.lr);
  char ratio_text[32];
  std::snprintf(ratio_text, sizeof ratio_text, "%.17g", trainer.participation_ratio);
  return {
      {"run_id", run_id()},
      {"scenario", num(scenario)},
      {"dataset", std::string(to_string(dataset))},
      {"scale", std::string(to_string(scale))},
      {"paradigm", std::string(trainers::to_string(trainer.paradigm))},
      {"model", std::string(models::to_string(model.kind))},
      {"input_dim", num(model.input_dim)},
      {"num_classes", num(model.num_classes)},
      {"hidden_dim", num(model.hidden_dim)},
      {"conv_channels", num(model.conv_channels)},
      {"param_count", num(model.parameter_count())},
      {"participants", num(trainer.participants)},
      {"ratio", ratio_text},
      {"rounds", num(trainer.rounds)},
      {"local_epochs", num(trainer.local_epochs)},
      {"batch_size", num(trainer.batch_size)},
      {"lr", lr_text},
      {"seed", num(trainer.seed)},
      {"budget_bytes", num(trainer.upload_budget_bytes)},
      {"partition", std::string(to_string(partition))},
      {"shards_per_client", num(shards_per_client)},
  };
}

void ExperimentConfig::validate() const {
  model.validate();
  trainer.validate();
  const DatasetShape shape = shape_of(dataset);
  if (model.input_dim != shape.dim || model.num_classes != shape.classes) {
    throw ConfigError("model dimensions do not match dataset " + std::string(to_string(dataset)));
  }
  if (partition == data::PartitionScheme::kShards && shards_per_client < 1) {
    throw ConfigError("shards per client must be >= 1");
  }
  if (trainer.paradigm == trainers::Paradigm::kCentralized &&
      trainer.upload_budget_bytes < trainers::bytes_per_example(shape.dim)) {
    throw ConfigError("upload budget " + std::to_string(trainer.upload_budget_bytes) +
                      " bytes is below one example (" +
                      std::to_string(trainers::bytes_per_example(shape.dim)) + " bytes)");
  }
}

std::vector<ExperimentConfig> scenario(int id, DatasetKind dataset,
                                       trainers::Paradigm paradigm, Scale scale) {
  std::vector<std::size_t> participant_counts;
  std::size_t rounds = 0;
  switch (id) {
    case 1:
      participant_counts = {50};
      rounds = 100;
      break;
    case 2:
      participant_counts = {50};
      rounds = 200;
      break;
    case 3:
      participant_counts = {20, 40, 60, 80, 100};
      rounds = 100;
      break;
    default:
      throw ConfigError("unknown scenario " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
  if (scale == Scale::kDesk) rounds /= 2;

  const DatasetShape shape = shape_of(dataset);
  std::vector<ExperimentConfig> configs;
  for (std::size_t p : participant_counts) {
    ExperimentConfig c;
    c.scenario = id;
    c.dataset = dataset;
    c.scale = scale;
    c.model.kind = scale == Scale::kDesk ? models::ModelKind::kMlp : models::ModelKind::kCnnSmall;
    c.model.input_dim = shape.dim;
    c.model.num_classes = shape.classes;
    c.trainer.paradigm = paradigm;
    c.trainer.participants = p;
    c.trainer.participation_ratio = 0.2;
    c.trainer.rounds = rounds;
    c.trainer.local_epochs = paradigm == trainers::Paradigm::kCentralized ? 1 : 10;
    c.trainer.batch_size = 32;
    c.trainer.lr = 0.05;
    c.trainer.seed = kDefaultSeed;
    c.trainer.upload_budget_bytes = kDefaultBudgetExamples * trainers::bytes_per_example(shape.dim);
    c.partition = data::PartitionScheme::kShards;
    c.shards_per_client = 2;
    configs.push_back(std::move(c));
  }
  return configs;
}

}  // namespace fedbench::harness
