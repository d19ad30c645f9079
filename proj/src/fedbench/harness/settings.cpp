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
#include <charconv>
#include <fstream>
#include <istream>
#include <string>

#include "fedbench/error.hpp"
#include "fedbench/harness/harness.hpp"

namespace fedbench::harness {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const Settings& settings, std::string_view key) {
  const std::string& text = settings.find(key)->second;
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value '" + text + "' for " + std::string(key));
  }
  return value;
}

bool has(const Settings& settings, std::string_view key) {
  return settings.find(key) != settings.end();
}

const std::string& text(const Settings& settings, std::string_view key) {
  return settings.find(key)->second;
}

}  // namespace

const std::vector<std::string_view>& setting_keys() {
  static const std::vector<std::string_view> keys = {
      "scenario",      "dataset",   "paradigm",      "participants", "ratio",
      "rounds",        "local-epochs", "batch-size", "lr",           "model",
      "hidden-dim",    "conv-channels", "partition", "shards-per-client",
      "scale",         "seed",      "budget-bytes",  "data-dir",     "out",
      "threads",
  };
  return keys;
}

void set_setting(Settings& settings, std::string_view key, std::string_view value) {
  const auto& keys = setting_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
  settings.insert_or_assign(std::string(key), std::string(value));
}

void parse_settings(std::istream& in, Settings& settings, std::string_view origin) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": expected key=value");
    }
    try {
      set_setting(settings, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_settings_file(const std::filesystem::path& path, Settings& settings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  parse_settings(in, settings, path.string());
}

std::vector<ExperimentConfig> resolve(const Settings& settings) {
  int id = 0;
  if (has(settings, "scenario")) id = parse_number<int>(settings, "scenario");
  const DatasetKind dataset =
      has(settings, "dataset") ? parse_dataset(text(settings, "dataset")) : DatasetKind::kMnist;
  const trainers::Paradigm paradigm = has(settings, "paradigm")
                                          ? trainers::parse_paradigm(text(settings, "paradigm"))
                                          : trainers::Paradigm::kFederated;
  const Scale scale = has(settings, "scale") ? parse_scale(text(settings, "scale")) : Scale::kDesk;

  std::vector<ExperimentConfig> configs = scenario(id == 0 ? 1 : id, dataset, paradigm, scale);
  if (id == 0) {
    for (auto& c : configs) c.scenario = 0;
  }

  for (auto& c : configs) {
    auto& t = c.trainer;
    if (has(settings, "participants")) t.participants = parse_number<std::size_t>(settings, "participants");
    if (has(settings, "ratio")) t.participation_ratio = parse_number<double>(settings, "ratio");
    if (has(settings, "rounds")) t.rounds = parse_number<std::size_t>(settings, "rounds");
    if (has(settings, "local-epochs")) t.local_epochs = parse_number<std::size_t>(settings, "local-epochs");
    if (has(settings, "batch-size")) t.batch_size = parse_number<std::size_t>(settings, "batch-size");
    if (has(settings, "lr")) t.lr = parse_number<double>(settings, "lr");
    if (has(settings, "seed")) t.seed = parse_number<std::uint64_t>(settings, "seed");
    if (has(settings, "budget-bytes")) t.upload_budget_bytes = parse_number<std::uint64_t>(settings, "budget-bytes");
    if (has(settings, "threads")) t.threads = parse_number<std::size_t>(settings, "threads");
    if (has(settings, "model")) c.model.kind = models::parse_model_kind(text(settings, "model"));
    if (has(settings, "hidden-dim")) c.model.hidden_dim = parse_number<std::size_t>(settings, "hidden-dim");
    if (has(settings, "conv-channels")) c.model.conv_channels = parse_number<std::size_t>(settings, "conv-channels");
    if (has(settings, "partition")) c.partition = parse_partition(text(settings, "partition"));
    if (has(settings, "shards-per-client")) c.shards_per_client = parse_number<std::size_t>(settings, "shards-per-client");
    if (has(settings, "data-dir")) c.data_dir = text(settings, "data-dir");
    if (has(settings, "out")) c.out_dir = text(settings, "out");
    c.validate();
  }
  return configs;
}

}  // namespace fedbench::harness
