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

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "fedbench/error.hpp"
#include "fedbench/metrics/metrics.hpp"

namespace fedbench::metrics {

ConvergenceCurve make_curve(std::string run_id,
                            std::vector<std::pair<std::string, std::string>> config_echo,
                            std::span<const trainers::RoundResult> rounds) {
  ConvergenceCurve curve{std::move(run_id), std::move(config_echo), {}};
  curve.records.reserve(rounds.size());
  for (const auto& r : rounds) {
    curve.records.push_back(
        {r.round, r.train_loss, r.test_accuracy, r.bytes_up, r.bytes_down, r.wall_ms});
  }
  return curve;
}

ByteTotals cumulative_bytes(const ConvergenceCurve& curve) {
  ByteTotals totals;
  for (const auto& r : curve.records) {
    totals.up += r.bytes_up;
    totals.down += r.bytes_down;
  }
  return totals;
}

BestAccuracy best_accuracy(const ConvergenceCurve& curve) {
  if (curve.records.empty()) throw InvalidInput("best_accuracy of an empty curve");
  BestAccuracy best{curve.records.front().round, curve.records.front().test_accuracy};
  for (const auto& r : curve.records) {
    if (r.test_accuracy > best.accuracy) best = {r.round, r.test_accuracy};
  }
  return best;
}

std::string format_csv(const ConvergenceCurve& curve) {
  std::string out = kCsvHeader;
  out += '\n';
  char line[256];
  for (const auto& r : curve.records) {
    std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,%" PRIu64 ",%" PRIu64 ",%.6g\n", r.round,
                  r.train_loss, r.test_accuracy, r.bytes_up, r.bytes_down, r.wall_ms);
    out += line;
  }
  return out;
}

void export_csv(const ConvergenceCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_csv(curve);
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace fedbench::metrics
