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

#include <cmath>
#include <numeric>
#include <string>

#include "fedbench/data/data.hpp"
#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench::data {
namespace {

// Fixed seed for cluster directions when there are more classes than
// dimensions; keeps means independent of the sampling seed.
constexpr std::uint64_t kMeanSeed = 0x5EEDC1A55E5ULL;

std::vector<double> cluster_means(std::size_t d, int k, double separation) {
  const double radius = separation / std::sqrt(2.0);
  std::vector<double> means(static_cast<std::size_t>(k) * d, 0.0);
  if (static_cast<std::size_t>(k) <= d) {
    for (int c = 0; c < k; ++c) means[static_cast<std::size_t>(c) * d + c] = radius;
    return means;
  }
  Rng rng(kMeanSeed);
  for (int c = 0; c < k; ++c) {
    double* mu = means.data() + static_cast<std::size_t>(c) * d;
    double norm = 0.0;
    while (norm == 0.0) {
      for (std::size_t j = 0; j < d; ++j) mu[j] = rng.normal();
      norm = std::sqrt(std::inner_product(mu, mu + d, mu, 0.0));
    }
    for (std::size_t j = 0; j < d; ++j) mu[j] *= radius / norm;
  }
  return means;
}

}  // namespace

Dataset generate_synthetic(std::size_t n, std::size_t d, int k, double separation,
                           std::uint64_t seed) {
  if (k < 2 || n < static_cast<std::size_t>(k)) {
    throw InvalidInput("synthetic data needs n >= k >= 2 (n=" + std::to_string(n) +
                       ", k=" + std::to_string(k) + ")");
  }
  if (d == 0) throw InvalidInput("synthetic data needs d >= 1");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw InvalidInput("synthetic separation must be finite and non-negative");
  }
  const auto means = cluster_means(d, k, separation);
  Rng rng(seed);
  std::vector<double> features(n * d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(k));
    labels[i] = c;
    const double* mu = means.data() + static_cast<std::size_t>(c) * d;
    for (std::size_t j = 0; j < d; ++j) features[i * d + j] = mu[j] + rng.normal();
  }
  return Dataset(std::move(features), std::move(labels), d, k);
}

}  // namespace fedbench::data
