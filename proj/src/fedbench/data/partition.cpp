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
#include <numeric>
#include <string>

#include "fedbench/data/data.hpp"
#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench::data {

PartitionPlan partition_iid(const Dataset& data, std::size_t participants,
                            std::uint64_t seed) {
  const std::size_t n = data.size();
  if (participants == 0 || participants > n) {
    throw InvalidInput("iid partition needs 1 <= p <= n (p=" + std::to_string(participants) +
                       ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(order));

  PartitionPlan plan;
  plan.scheme = PartitionScheme::kIid;
  plan.assignments.resize(participants);
  const std::size_t base = n / participants;
  const std::size_t extra = n % participants;
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < participants; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    plan.assignments[k].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                               order.begin() + static_cast<std::ptrdiff_t>(cursor + len));
    cursor += len;
  }
  return plan;
}

PartitionPlan partition_shards(const Dataset& data, std::size_t participants,
                               std::size_t shards_per_client, std::uint64_t seed) {
  const std::size_t n = data.size();
  const std::size_t shard_count = participants * shards_per_client;
  if (participants == 0 || shards_per_client == 0 || shard_count > n) {
    throw InvalidInput("shard partition has shard size 0 (n=" + std::to_string(n) +
                       ", p=" + std::to_string(participants) +
                       ", shards_per_client=" + std::to_string(shards_per_client) + ")");
  }
  const std::size_t shard_size = n / shard_count;

  std::vector<std::size_t> by_label(n);
  std::iota(by_label.begin(), by_label.end(), std::size_t{0});
  std::stable_sort(by_label.begin(), by_label.end(), [&](std::size_t a, std::size_t b) {
    return data.label(a) < data.label(b);
  });

  Rng rng(seed);
  std::vector<std::size_t> shard_order(shard_count);
  std::iota(shard_order.begin(), shard_order.end(), std::size_t{0});
  rng.shuffle(std::span(shard_order));

  PartitionPlan plan;
  plan.scheme = PartitionScheme::kShards;
  plan.shards_per_client = shards_per_client;
  plan.shard_size = shard_size;
  plan.assignments.resize(participants);
  for (std::size_t k = 0; k < participants; ++k) {
    auto& list = plan.assignments[k];
    list.reserve(shards_per_client * shard_size);
    for (std::size_t s = 0; s < shards_per_client; ++s) {
      const std::size_t shard = shard_order[k * shards_per_client + s];
      const auto first = by_label.begin() + static_cast<std::ptrdiff_t>(shard * shard_size);
      list.insert(list.end(), first, first + static_cast<std::ptrdiff_t>(shard_size));
    }
    // Seeded order within a participant so uploads interleave its shards.
    rng.shuffle(std::span(list));
  }
  plan.dropped.assign(by_label.begin() + static_cast<std::ptrdiff_t>(shard_count * shard_size),
                      by_label.end());
  return plan;
}

}  // namespace fedbench::data
