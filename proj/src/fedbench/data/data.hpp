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
#include <memory>
#include <span>
#include <vector>

namespace fedbench::data {

// Labeled feature rows. Immutable once built; copies and subsets share the
// underlying storage, so passing a Dataset by value is cheap.
class Dataset {
 public:
  // Row-major `features` of shape [labels.size() x dim]. Throws InvalidInput
  // when empty, when a label is outside [0, num_classes), or when a feature
  // is not finite.
  Dataset(std::vector<double> features, std::vector<int> labels, std::size_t dim,
          int num_classes);

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return storage_->dim; }
  int num_classes() const { return storage_->num_classes; }

  std::span<const double> row(std::size_t i) const {
    return {storage_->features.data() + rows_[i] * storage_->dim, storage_->dim};
  }
  int label(std::size_t i) const { return storage_->labels[rows_[i]]; }

  // Rows `indices` in the given order. Throws InvalidInput on an empty list
  // or an out-of-range index.
  Dataset subset(std::span<const std::size_t> indices) const;

  // Copies rows `indices` into `out` (row-major, indices.size() x dim).
  void gather(std::span<const std::size_t> indices, std::span<double> out) const;

  std::vector<int> labels() const;
  std::vector<std::size_t> label_histogram() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  struct Storage {
    std::vector<double> features;
    std::vector<int> labels;
    std::size_t dim = 0;
    int num_classes = 0;
  };

  Dataset(std::shared_ptr<const Storage> storage, std::vector<std::size_t> rows)
      : storage_(std::move(storage)), rows_(std::move(rows)) {}

  std::shared_ptr<const Storage> storage_;
  std::vector<std::size_t> rows_;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Stock MNIST IDX files: train-images-idx3-ubyte, train-labels-idx1-ubyte,
// t10k-images-idx3-ubyte, t10k-labels-idx1-ubyte (the dotted variant
// "train-images.idx3-ubyte" is accepted too). Pixels are scaled by 1/255.
Split load_mnist(const std::filesystem::path& dir);

// Reads one IDX image/label file pair.
Dataset load_idx_pair(const std::filesystem::path& images,
                      const std::filesystem::path& labels);

// CIFAR-10 binary version: data_batch_1.bin .. data_batch_5.bin and
// test_batch.bin, 3073-byte records. Pixels are scaled by 1/255.
Split load_cifar10(const std::filesystem::path& dir);

// Reads one CIFAR-10 binary batch file.
Dataset load_cifar_batch(const std::filesystem::path& file);

// `k` spherical unit-variance Gaussian clusters in `d` dimensions. Cluster
// means depend only on (d, k, separation); when k <= d they sit on scaled
// coordinate axes with pairwise distance exactly `separation`. Labels cycle
// 0..k-1 so class counts differ by at most one.
Dataset generate_synthetic(std::size_t n, std::size_t d, int k, double separation,
                           std::uint64_t seed);

// Writes `label,f0,...,f{d-1}` CSV. Throws IoError naming the path.
void export_csv(const Dataset& data, const std::filesystem::path& path);

enum class PartitionScheme { kIid, kShards };

struct PartitionPlan {
  PartitionScheme scheme = PartitionScheme::kIid;
  std::size_t shards_per_client = 0;  // shards scheme only
  std::size_t shard_size = 0;         // shards scheme only
  std::vector<std::vector<std::size_t>> assignments;
  std::vector<std::size_t> dropped;  // remainder rows left out of the plan

  std::size_t participants() const { return assignments.size(); }
};

// Seeded permutation cut into p contiguous chunks whose sizes differ by at
// most one. Throws InvalidInput unless 1 <= p <= n.
PartitionPlan partition_iid(const Dataset& data, std::size_t participants,
                            std::uint64_t seed);

// Label-sorted rows cut into p * shards_per_client equal shards; each
// participant draws shards_per_client of them without replacement. Rows past
// the last full shard are dropped. Throws InvalidInput when the shard size
// would be zero.
PartitionPlan partition_shards(const Dataset& data, std::size_t participants,
                               std::size_t shards_per_client, std::uint64_t seed);

}  // namespace fedbench::data
