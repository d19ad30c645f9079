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
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "fedbench/data/data.hpp"
#include "fedbench/error.hpp"

namespace fedbench::data {

Dataset::Dataset(std::vector<double> features, std::vector<int> labels, std::size_t dim,
                 int num_classes) {
  if (labels.empty()) throw InvalidInput("dataset must contain at least one example");
  if (dim == 0) throw InvalidInput("dataset feature dimension must be positive");
  if (num_classes < 2) throw InvalidInput("dataset needs at least two classes");
  if (features.size() != labels.size() * dim) {
    throw InvalidInput("feature matrix has " + std::to_string(features.size()) +
                       " entries, expected " + std::to_string(labels.size() * dim));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw InvalidInput("label " + std::to_string(labels[i]) + " at row " +
                         std::to_string(i) + " outside [0, " +
                         std::to_string(num_classes) + ")");
    }
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw InvalidInput("dataset feature is not finite");
  }
  auto storage = std::make_shared<Storage>();
  storage->features = std::move(features);
  storage->labels = std::move(labels);
  storage->dim = dim;
  storage->num_classes = num_classes;
  rows_.resize(storage->labels.size());
  std::iota(rows_.begin(), rows_.end(), std::size_t{0});
  storage_ = std::move(storage);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw InvalidInput("subset needs at least one index");
  std::vector<std::size_t> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= rows_.size()) {
      throw InvalidInput("subset index " + std::to_string(i) + " out of range for " +
                         std::to_string(rows_.size()) + " rows");
    }
    rows.push_back(rows_[i]);
  }
  return Dataset(storage_, std::move(rows));
}

void Dataset::gather(std::span<const std::size_t> indices, std::span<double> out) const {
  const std::size_t d = dim();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = row(indices[r]);
    std::memcpy(out.data() + r * d, src.data(), d * sizeof(double));
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = label(i);
  return out;
}

std::vector<std::size_t> Dataset::label_histogram() const {
  std::vector<std::size_t> hist(static_cast<std::size_t>(num_classes()), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) ++hist[static_cast<std::size_t>(label(i))];
  return hist;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim() != b.dim() || a.num_classes() != b.num_classes()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.label(i) != b.label(i)) return false;
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    if (!std::equal(ra.begin(), ra.end(), rb.begin())) return false;
  }
  return true;
}

void export_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "label";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",f" << j;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.label(i);
    for (double v : data.row(i)) out << ',' << v;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace fedbench::data
