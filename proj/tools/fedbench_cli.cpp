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

// fedbench command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedbench/fedbench.h"

namespace {

int exit_code(fb_status status) {
  switch (status) {
    case FB_OK:
      return 0;
    case FB_ERROR_CONFIG:
    case FB_ERROR_NUMERIC:
      return 1;
    default:
      return 2;
  }
}

int report(fb_status status) {
  std::fprintf(stderr, "fedbench: %s: %s\n", fb_status_name(status), fb_last_error());
  return exit_code(status);
}

struct FlagSet {
  std::map<std::string, std::string> values;
  std::string config_path;

  void attach(CLI::App* cmd, bool with_paradigm) {
    auto opt = [&](const std::string& key, const std::string& help) {
      return cmd->add_option("--" + key, values[key], help);
    };
    opt("scenario", "Scenario id")->check(CLI::IsMember({"1", "2", "3"}));
    opt("dataset", "mnist|cifar10|synthetic")->check(CLI::IsMember({"mnist", "cifar10", "synthetic"}));
    if (with_paradigm) {
      opt("paradigm", "centralized|distributed|federated")
          ->check(CLI::IsMember({"centralized", "distributed", "federated"}));
    }
    opt("participants", "Number of participants p");
    opt("ratio", "Participation ratio C in (0,1]");
    opt("rounds", "Communication rounds R");
    opt("local-epochs", "Local epochs E");
    opt("batch-size", "Mini-batch size");
    opt("lr", "Learning rate");
    opt("model", "logreg|mlp|cnn-small")->check(CLI::IsMember({"logreg", "mlp", "cnn-small"}));
    opt("hidden-dim", "mlp hidden width");
    opt("conv-channels", "cnn-small first conv width");
    opt("partition", "iid|shards")->check(CLI::IsMember({"iid", "shards"}));
    opt("shards-per-client", "Shards per participant (shards partition)");
    opt("scale", "paper|desk")->check(CLI::IsMember({"paper", "desk"}));
    opt("seed", "Experiment seed");
    opt("budget-bytes", "Centralized upload budget per participant per round");
    opt("data-dir", "Dataset directory (default $FEDBENCH_DATA_DIR)");
    opt("out", "Output directory for CSV files");
    opt("threads", "Worker threads for client-local training");
    cmd->add_option("--config", config_path, "key=value settings file; flags override it");
  }

  // File first, then every flag given on the command line.
  fb_status apply(fb_config* config, CLI::App* cmd) const {
    if (!config_path.empty()) {
      if (fb_status s = fb_config_load_file(config, config_path.c_str()); s != FB_OK) return s;
    }
    for (const auto& [key, value] : values) {
      if (cmd->count("--" + key) == 0) continue;
      if (fb_status s = fb_config_set(config, key.c_str(), value.c_str()); s != FB_OK) return s;
    }
    return FB_OK;
  }
};

struct Row {
  std::string run_id;
  std::string paradigm;
  std::string participants;
  fb_summary summary{};
  std::size_t rounds = 0;
  std::string csv;
};

void print_table(const std::vector<Row>& rows) {
  std::printf("%-44s %-12s %5s %6s %9s %9s %7s %14s %14s\n", "run_id", "paradigm", "p",
              "rounds", "final_acc", "best_acc", "best_r", "bytes_up", "bytes_down");
  for (const auto& r : rows) {
    std::printf("%-44s %-12s %5s %6zu %9.4f %9.4f %7llu %14llu %14llu\n", r.run_id.c_str(),
                r.paradigm.c_str(), r.participants.c_str(), r.rounds, r.summary.final_accuracy,
                r.summary.best_accuracy, static_cast<unsigned long long>(r.summary.best_round),
                static_cast<unsigned long long>(r.summary.total_bytes_up),
                static_cast<unsigned long long>(r.summary.total_bytes_down));
  }
}

// Runs every experiment the config expands to, appending summary rows.
fb_status run_plan(const fb_config* config, std::vector<Row>& rows) {
  fb_plan* plan = nullptr;
  if (fb_status s = fb_plan_create(config, &plan); s != FB_OK) return s;
  fb_status status = FB_OK;
  for (std::size_t i = 0; i < fb_plan_size(plan); ++i) {
    std::fprintf(stderr, "running %s ...\n", fb_plan_run_id(plan, i));
    fb_run* run = nullptr;
    status = fb_plan_run(plan, i, &run);
    if (status != FB_OK) break;
    Row row;
    row.run_id = fb_run_id(run);
    row.paradigm = fb_run_config_value(run, "paradigm");
    row.participants = fb_run_config_value(run, "participants");
    row.rounds = fb_run_round_count(run);
    row.csv = fb_run_csv_path(run);
    fb_run_summary(run, &row.summary);
    std::fprintf(stderr, "  wrote %s\n", row.csv.c_str());
    rows.push_back(std::move(row));
    fb_run_destroy(run);
  }
  fb_plan_destroy(plan);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedbench: centralized / distributed / federated convergence lab"};
  app.require_subcommand(1);
  FlagSet run_flags;
  FlagSet compare_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one paradigm (all configs of a scenario)");
  run_flags.attach(run_cmd, true);
  auto* compare_cmd =
      app.add_subcommand("compare", "Run centralized, distributed and federated side by side");
  compare_flags.attach(compare_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::printf("%s", app.help().c_str());
    return 0;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "fedbench: %s\n\n%s", e.what(), app.help().c_str());
    return 1;
  }

  fb_config* config = nullptr;
  if (fb_status s = fb_config_create(&config); s != FB_OK) return report(s);

  std::vector<Row> rows;
  fb_status status = FB_OK;
  if (*run_cmd) {
    status = run_flags.apply(config, run_cmd);
    if (status == FB_OK) status = run_plan(config, rows);
  } else {
    status = compare_flags.apply(config, compare_cmd);
    for (const char* paradigm : {"centralized", "distributed", "federated"}) {
      if (status != FB_OK) break;
      status = fb_config_set(config, "paradigm", paradigm);
      if (status == FB_OK) status = run_plan(config, rows);
    }
  }
  fb_config_destroy(config);
  if (status != FB_OK) {
    if (status == FB_ERROR_CONFIG) std::fprintf(stderr, "%s", app.help().c_str());
    return report(status);
  }
  print_table(rows);
  return 0;
}
