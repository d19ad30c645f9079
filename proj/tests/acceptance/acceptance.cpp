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

// Acceptance checks. One line per criterion: PASS, FAIL or SKIP, with the
// measured quantity and the pinned tolerance.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "fedbench/data/data.hpp"
#include "fedbench/error.hpp"
#include "fedbench/harness/harness.hpp"
#include "fedbench/models/models.hpp"
#include "fedbench/rng.hpp"
#include "fedbench/trainers/trainers.hpp"

using namespace fedbench;
using models::ModelConfig;
using models::ModelKind;
using trainers::Paradigm;

namespace {

// Pinned tolerances.
constexpr double kGradRelTol = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr double kPooledTol = 1e-9;
constexpr double kSyntheticAccuracy = 0.95;
constexpr double kTrendGap = 0.05;
constexpr double kScaleNoise = 0.02;
constexpr std::size_t kPartitionConfigs = 120;

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome = Outcome::kPass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Verdict()> body;
};

class Skip : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> uniform(std::size_t n, std::mt19937_64& gen, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

models::Batch random_batch(std::size_t b, std::size_t d, int k, std::mt19937_64& gen) {
  models::Batch batch;
  const auto x = uniform(b * d, gen, 1.0);
  batch.features = Eigen::Map<const models::RowMatrix>(x.data(), static_cast<Eigen::Index>(b),
                                                       static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < b; ++i) batch.labels.push_back(static_cast<int>(gen() % k));
  return batch;
}

ModelConfig make_model(ModelKind kind, std::size_t d, int k, std::size_t width) {
  ModelConfig c{kind, d, k};
  if (kind == ModelKind::kMlp) c.hidden_dim = width;
  if (kind == ModelKind::kCnnSmall) c.conv_channels = width;
  return c;
}

std::filesystem::path mnist_dir() {
  const auto base = harness::resolve_data_dir({});
  for (const auto& dir : {base, base / "mnist"}) {
    if (std::filesystem::exists(dir / "train-images-idx3-ubyte") ||
        std::filesystem::exists(dir / "train-images.idx3-ubyte")) {
      return dir;
    }
  }
  throw Skip("MNIST files not found under " + base.string() + " (set FEDBENCH_DATA_DIR)");
}

harness::ExperimentConfig desk_config(int scenario, Paradigm paradigm) {
  auto configs = harness::scenario(scenario, harness::DatasetKind::kMnist, paradigm,
                                   harness::Scale::kDesk);
  for (auto& c : configs) c.data_dir = mnist_dir();
  return configs.front();
}

// ---------------------------------------------------------------------------

Verdict gradient_check() {
  // Three seeded instances per kind, each under 100 parameters.
  const std::vector<ModelConfig> instances = {
      make_model(ModelKind::kLogReg, 2, 2, 0),   make_model(ModelKind::kLogReg, 4, 3, 0),
      make_model(ModelKind::kLogReg, 5, 4, 0),   make_model(ModelKind::kMlp, 4, 3, 5),
      make_model(ModelKind::kMlp, 3, 4, 8),      make_model(ModelKind::kMlp, 6, 3, 4),
      make_model(ModelKind::kCnnSmall, 64, 2, 1), make_model(ModelKind::kCnnSmall, 16, 3, 1),
      make_model(ModelKind::kCnnSmall, 48, 2, 1),
  };
  double worst = 0.0;
  std::mt19937_64 gen(1234);
  for (const auto& cfg : instances) {
    auto p = uniform(cfg.parameter_count(), gen, 0.8);
    const auto batch = random_batch(4, cfg.input_dim, cfg.num_classes, gen);
    const auto g = models::gradient(p, cfg, batch);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double keep = p[i];
      p[i] = keep + kGradStep;
      const double up = models::loss(p, cfg, batch);
      p[i] = keep - kGradStep;
      const double down = models::loss(p, cfg, batch);
      p[i] = keep;
      const double fd = (up - down) / (2 * kGradStep);
      worst = std::max(worst, std::abs(g[i] - fd) / std::max({std::abs(g[i]), std::abs(fd), 1e-6}));
    }
  }
  return {worst < kGradRelTol ? Outcome::kPass : Outcome::kFail,
          fmt("%zu instances, max rel err %.3g (tol %.0e)", instances.size(), worst, kGradRelTol)};
}

Verdict pooled_gd() {
  const auto train = data::generate_synthetic(300, 8, 4, 3.0, 77);
  const auto test = data::generate_synthetic(100, 8, 4, 3.0, 78);
  double worst = 0.0;
  for (auto kind : {ModelKind::kLogReg, ModelKind::kMlp}) {
    const auto model = make_model(kind, 8, 4, 6);
    for (std::size_t p : {2u, 5u, 10u}) {
      trainers::TrainerConfig cfg;
      cfg.paradigm = Paradigm::kFederated;
      cfg.participants = p;
      cfg.participation_ratio = 1.0;
      cfg.rounds = 1;
      cfg.local_epochs = 1;
      cfg.batch_size = train.size();
      cfg.lr = 0.3;
      cfg.seed = 5;
      const auto plan = data::partition_iid(train, p, 6);
      const auto got = trainers::run(cfg, model, plan, train, test).front().global_params;
      const auto theta = models::init_params(model, derive_seed(cfg.seed, Stream::kInit));
      const auto want = models::sgd_step(
          theta, models::gradient(theta, model, models::make_batch(train)), cfg.lr);
      for (std::size_t j = 0; j < want.size(); ++j) worst = std::max(worst, std::abs(want[j] - got[j]));
    }
  }
  return {worst < kPooledTol ? Outcome::kPass : Outcome::kFail,
          fmt("6 runs, max |delta| %.3g (tol %.0e)", worst, kPooledTol)};
}

Verdict distributed_equals_federated() {
  const auto train = data::generate_synthetic(2000, 20, 10, 4.0, 31);
  const auto test = data::generate_synthetic(500, 20, 10, 4.0, 32);
  const auto model = make_model(ModelKind::kMlp, 20, 10, 32);
  const auto plan = data::partition_shards(train, 10, 2, 33);
  trainers::TrainerConfig cfg;
  cfg.participants = 10;
  cfg.rounds = 10;
  cfg.local_epochs = 2;
  cfg.batch_size = 32;
  cfg.lr = 0.05;
  cfg.seed = 42;
  cfg.paradigm = Paradigm::kFederated;
  cfg.participation_ratio = 1.0;
  const auto fed = trainers::run(cfg, model, plan, train, test);
  cfg.paradigm = Paradigm::kDistributed;
  cfg.participation_ratio = 0.2;  // ignored: every participant trains
  const auto dist = trainers::run(cfg, model, plan, train, test);
  std::size_t mismatched = 0;
  for (std::size_t r = 0; r < fed.size(); ++r) {
    const auto& a = fed[r];
    const auto& b = dist[r];
    const bool same =
        a.round == b.round && a.bytes_up == b.bytes_up && a.bytes_down == b.bytes_down &&
        a.active_clients == b.active_clients &&
        std::memcmp(&a.train_loss, &b.train_loss, sizeof(double)) == 0 &&
        std::memcmp(&a.test_accuracy, &b.test_accuracy, sizeof(double)) == 0 &&
        a.global_params.size() == b.global_params.size() &&
        std::memcmp(a.global_params.data(), b.global_params.data(),
                    a.global_params.size() * sizeof(double)) == 0;
    if (!same) ++mismatched;
  }
  return {mismatched == 0 && fed.size() == 10 ? Outcome::kPass : Outcome::kFail,
          fmt("%zu rounds compared bitwise, %zu differ", fed.size(), mismatched)};
}

Verdict partition_invariants() {
  std::mt19937_64 gen(99);
  std::size_t violations = 0, shard_configs = 0;
  for (std::size_t trial = 0; trial < kPartitionConfigs; ++trial) {
    const std::size_t n = 10 + gen() % 3000;
    const int k = 2 + static_cast<int>(gen() % 9);
    std::vector<int> labels(n);
    for (auto& y : labels) y = static_cast<int>(gen() % k);
    const data::Dataset d(std::vector<double>(n, 0.5), labels, 1, k);
    const std::size_t p = 1 + gen() % std::min<std::size_t>(n, 100);
    const std::size_t spc = 1 + gen() % 3;
    const std::uint64_t seed = gen();

    auto check = [&](const data::PartitionPlan& plan, bool shards) {
      std::vector<int> seen(n, 0);
      std::size_t lo = n, hi = 0;
      for (const auto& list : plan.assignments) {
        for (auto i : list) ++seen[i];
        lo = std::min(lo, list.size());
        hi = std::max(hi, list.size());
      }
      for (auto i : plan.dropped) ++seen[i];
      if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) ++violations;
      if (plan.participants() != p) ++violations;
      if (shards) {
        if (lo != hi || plan.dropped.size() >= p * spc) ++violations;
      } else {
        if (hi - lo > 1 || !plan.dropped.empty()) ++violations;
      }
    };
    check(data::partition_iid(d, p, seed), false);
    if (n / (p * spc) > 0) {
      check(data::partition_shards(d, p, spc, seed), true);
      ++shard_configs;
    }
  }
  return {violations == 0 && shard_configs >= 100 ? Outcome::kPass : Outcome::kFail,
          fmt("%zu iid + %zu shard configs, %zu violations", kPartitionConfigs, shard_configs,
              violations)};
}

std::string csv_without_wall_ms(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

Verdict determinism() {
  auto config = desk_config(1, Paradigm::kFederated);
  const auto root = std::filesystem::temp_directory_path() /
                    ("fedbench_acceptance_" + std::to_string(::getpid()));
  harness::DataCache cache;
  std::vector<std::string> csvs;
  for (std::size_t threads : {1u, 1u, 4u}) {
    config.trainer.threads = threads;
    config.out_dir = root / std::to_string(csvs.size());
    harness::run_experiment(config, cache);
    csvs.push_back(csv_without_wall_ms(config.csv_path()));
  }
  std::filesystem::remove_all(root);
  const bool same = csvs[0] == csvs[1] && csvs[0] == csvs[2] && !csvs[0].empty();
  return {same ? Outcome::kPass : Outcome::kFail,
          fmt("3 runs (threads 1, 1, 4) of %s: %s", config.run_id().c_str(),
              same ? "identical" : "differ")};
}

Verdict synthetic_convergence() {
  const auto train = data::generate_synthetic(2000, 20, 10, 10.0, 11);
  const auto test = data::generate_synthetic(1000, 20, 10, 10.0, 12);
  const ModelConfig model{ModelKind::kLogReg, 20, 10};
  trainers::TrainerConfig cfg;
  cfg.paradigm = Paradigm::kFederated;
  cfg.participants = 10;
  cfg.participation_ratio = 0.5;
  cfg.local_epochs = 5;
  cfg.rounds = 30;
  cfg.batch_size = 32;
  cfg.lr = 0.05;
  cfg.seed = 42;
  const auto rounds = trainers::run(cfg, model, data::partition_iid(train, 10, 42), train, test);
  const double acc = rounds.back().test_accuracy;
  return {acc >= kSyntheticAccuracy ? Outcome::kPass : Outcome::kFail,
          fmt("final accuracy %.4f (need >= %.2f)", acc, kSyntheticAccuracy)};
}

Verdict paper_trend() {
  harness::DataCache cache;
  const harness::RunOptions quiet{false};
  auto final_acc = [&](const harness::ExperimentConfig& c) {
    return harness::run_experiment(c, cache, quiet).summary.final_accuracy;
  };
  std::ostringstream detail;
  bool ok = true;

  double s1[3], s2[3];
  const Paradigm order[3] = {Paradigm::kFederated, Paradigm::kDistributed, Paradigm::kCentralized};
  for (int i = 0; i < 3; ++i) {
    s1[i] = final_acc(desk_config(1, order[i]));
    s2[i] = final_acc(desk_config(2, order[i]));
  }
  const bool ordered = s1[0] >= s1[1] && s1[1] >= s1[2] && s1[0] - s1[2] >= kTrendGap;
  ok = ok && ordered;
  detail << fmt("s1 fed %.4f dist %.4f cent %.4f [%s]", s1[0], s1[1], s1[2],
                ordered ? "ordered" : "NOT ordered");
  bool more_rounds = true;
  for (int i = 0; i < 3; ++i) more_rounds = more_rounds && s2[i] >= s1[i];
  ok = ok && more_rounds;
  detail << fmt("; s2 fed %.4f dist %.4f cent %.4f [%s]", s2[0], s2[1], s2[2],
                more_rounds ? ">= s1" : "NOT >= s1");

  auto s3 = harness::scenario(3, harness::DatasetKind::kMnist, Paradigm::kFederated,
                              harness::Scale::kDesk);
  std::vector<double> by_p;
  for (auto& c : s3) {
    c.data_dir = mnist_dir();
    by_p.push_back(final_acc(c));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < by_p.size(); ++i) monotone = monotone && by_p[i] >= by_p[i - 1] - kScaleNoise;
  ok = ok && monotone;
  detail << "; s3 fed p=20..100";
  for (double a : by_p) detail << fmt(" %.4f", a);
  detail << (monotone ? " [non-decreasing]" : " [NOT non-decreasing]");
  return {ok ? Outcome::kPass : Outcome::kFail, detail.str()};
}

Verdict communication_accounting() {
  harness::DataCache cache;
  const harness::RunOptions quiet{false};
  auto base = harness::scenario(1, harness::DatasetKind::kSynthetic, Paradigm::kFederated,
                                harness::Scale::kDesk)
                  .front();
  base.model.kind = ModelKind::kLogReg;
  std::ostringstream detail;
  bool ok = true;

  {
    const auto r = harness::run_experiment(base, cache, quiet);
    const auto& t = base.trainer;
    const std::uint64_t want = t.rounds * trainers::selected_count(t.participants, t.participation_ratio) *
                               base.model.parameter_count() * 8;
    ok = ok && r.summary.bytes.up == want;
    detail << fmt("federated up %llu want %llu", static_cast<unsigned long long>(r.summary.bytes.up),
                  static_cast<unsigned long long>(want));
  }
  // Centralized twice: once where the budget binds, once where the pool runs out.
  for (std::size_t rounds : {3u, 50u}) {
    auto c = base;
    c.trainer.paradigm = Paradigm::kCentralized;
    c.trainer.local_epochs = 1;
    c.trainer.rounds = rounds;
    const auto r = harness::run_experiment(c, cache, quiet);
    const auto split = cache.get(c);
    const auto plan = data::partition_shards(split.train, c.trainer.participants, c.shards_per_client,
                                             derive_seed(c.trainer.seed, Stream::kPartition));
    const std::uint64_t per = trainers::bytes_per_example(split.train.dim());
    const std::uint64_t pool = (split.train.size() - plan.dropped.size()) * per;
    const std::uint64_t budget = rounds * c.trainer.participants * (c.trainer.upload_budget_bytes / per) * per;
    const std::uint64_t want = std::min(pool, budget);
    ok = ok && r.summary.bytes.up == want && r.summary.bytes.down == 0;
    detail << fmt("; centralized R=%zu up %llu want %llu", rounds,
                  static_cast<unsigned long long>(r.summary.bytes.up),
                  static_cast<unsigned long long>(want));
  }
  return {ok ? Outcome::kPass : Outcome::kFail, detail.str()};
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

Verdict mnist_loader() {
  const auto dir = mnist_dir();
  const auto split = data::load_mnist(dir);
  auto labels_file = dir / "t10k-labels-idx1-ubyte";
  if (!std::filesystem::exists(labels_file)) labels_file = dir / "t10k-labels.idx1-ubyte";
  std::ifstream in(labels_file, std::ios::binary);
  const std::vector<unsigned char> raw{std::istreambuf_iterator<char>(in), {}};
  bool ok = split.train.size() == 60000 && split.test.size() == 10000;
  ok = ok && be32(raw, 0) == 0x801 && be32(raw, 4) == 10000;
  std::size_t label_mismatch = 0;
  for (std::size_t i : {0u, 1u, 4999u, 9999u}) {
    if (split.test.label(i) != raw[8 + i]) ++label_mismatch;
  }
  ok = ok && label_mismatch == 0;

  // Malformed magic: copy the real test pair with one header byte flipped.
  const auto tmp = std::filesystem::temp_directory_path() /
                   ("fedbench_acceptance_idx_" + std::to_string(::getpid()));
  std::filesystem::create_directories(tmp);
  std::vector<unsigned char> fake_images{0x00, 0x00, 0x08, 0x04, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 7};
  std::ofstream(tmp / "images", std::ios::binary)
      .write(reinterpret_cast<const char*>(fake_images.data()), static_cast<std::streamsize>(fake_images.size()));
  std::vector<unsigned char> fake_labels{0x00, 0x00, 0x08, 0x01, 0, 0, 0, 1, 3};
  std::ofstream(tmp / "labels", std::ios::binary)
      .write(reinterpret_cast<const char*>(fake_labels.data()), static_cast<std::streamsize>(fake_labels.size()));
  bool rejected = false;
  try {
    data::load_idx_pair(tmp / "images", tmp / "labels");
  } catch (const FormatError&) {
    rejected = true;
  }
  std::filesystem::remove_all(tmp);
  ok = ok && rejected;
  return {ok ? Outcome::kPass : Outcome::kFail,
          fmt("train %zu test %zu, label spot-check mismatches %zu, bad magic %s", split.train.size(),
              split.test.size(), label_mismatch, rejected ? "rejected" : "ACCEPTED")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedbench acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "criterion number(s) to run (default: all)")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "gradient-check", 10, gradient_check},
      {2, "fedavg-pooled-gd", 10, pooled_gd},
      {3, "distributed-equals-federated", 30, distributed_equals_federated},
      {4, "partition-invariants", 10, partition_invariants},
      {5, "determinism", 300, determinism},
      {6, "synthetic-convergence", 60, synthetic_convergence},
      {7, "accuracy-trend", 1800, paper_trend},
      {8, "communication-accounting", 60, communication_accounting},
      {9, "mnist-loader", 30, mnist_loader},
  };

  int failed = 0, passed = 0, skipped = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const Skip& e) {
      v = {Outcome::kSkip, e.what()};
    } catch (const std::exception& e) {
      v = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.outcome == Outcome::kPass && secs >= c.time_limit_s) {
      v.outcome = Outcome::kFail;
      v.detail += fmt("; over time limit %.0f s", c.time_limit_s);
    }
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] criterion %d %s (%.1f s): %s\n", tag, c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
    (v.outcome == Outcome::kPass ? passed : v.outcome == Outcome::kFail ? failed : skipped)++;
  }
  std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
  if (failed > 0) return 1;
  if (passed == 0 && skipped > 0) return 77;
  return 0;
}
