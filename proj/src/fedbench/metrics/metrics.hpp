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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedbench/trainers/trainers.hpp"

namespace fedbench::metrics {

struct RoundRecord {
  std::size_t round = 0;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  double wall_ms = 0.0;  // informational; not covered by determinism checks
};

struct ConvergenceCurve {
  std::string run_id;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<RoundRecord> records;
};

ConvergenceCurve make_curve(std::string run_id,
                            std::vector<std::pair<std::string, std::string>> config_echo,
                            std::span<const trainers::RoundResult> rounds);

struct ByteTotals {
  std::uint64_t up = 0;
  std::uint64_t down = 0;
};

ByteTotals cumulative_bytes(const ConvergenceCurve& curve);

struct BestAccuracy {
  std::size_t round = 0;
  double accuracy = 0.0;
};

// Earliest round reaching the maximum accuracy. Throws InvalidInput on an
// empty curve.
BestAccuracy best_accuracy(const ConvergenceCurve& curve);

inline constexpr const char* kCsvHeader =
    "round,train_loss,test_accuracy,bytes_up,bytes_down,wall_ms";

// CSV text: header plus one row per record, floats at 6 significant digits.
std::string format_csv(const ConvergenceCurve& curve);

// Writes format_csv(curve) to `path`. Throws IoError naming the path.
void export_csv(const ConvergenceCurve& curve, const std::filesystem::path& path);

}  // namespace fedbench::metrics
