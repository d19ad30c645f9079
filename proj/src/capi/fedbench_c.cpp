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

#include "fedbench/fedbench.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fedbench/error.hpp"
#include "fedbench/harness/harness.hpp"

struct fb_config {
  fedbench::harness::Settings settings;
};

struct fb_plan {
  std::vector<fedbench::harness::ExperimentConfig> experiments;
  std::vector<std::string> run_ids;
  fedbench::harness::DataCache cache;
};

struct fb_run {
  fedbench::harness::ExperimentResult result;
  std::string csv_path;
};

namespace {

thread_local std::string last_error;

fb_status fail(fb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the in-flight exception onto a status code.
fb_status translate() {
  try {
    throw;
  } catch (const fedbench::ConfigError& e) {
    return fail(FB_ERROR_CONFIG, e.what());
  } catch (const fedbench::InvalidInput& e) {
    return fail(FB_ERROR_CONFIG, e.what());
  } catch (const fedbench::IoError& e) {
    return fail(FB_ERROR_IO, e.what());
  } catch (const fedbench::FormatError& e) {
    return fail(FB_ERROR_DATA, e.what());
  } catch (const fedbench::NumericalError& e) {
    return fail(FB_ERROR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FB_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FB_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(FB_ERROR_INTERNAL, "unknown error");
  }
}

template <class F>
fb_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return FB_OK;
  } catch (...) {
    return translate();
  }
}

}  // namespace

extern "C" {

const char* fb_version(void) { return "0.1.0"; }

const char* fb_last_error(void) { return last_error.c_str(); }

const char* fb_status_name(fb_status status) {
  switch (status) {
    case FB_OK:
      return "ok";
    case FB_ERROR_CONFIG:
      return "config error";
    case FB_ERROR_IO:
      return "I/O error";
    case FB_ERROR_DATA:
      return "data format error";
    case FB_ERROR_NUMERIC:
      return "numerical error";
    case FB_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

fb_status fb_config_create(fb_config** out) {
  if (out == nullptr) return fail(FB_ERROR_CONFIG, "null output handle");
  return guarded([&] { *out = new fb_config(); });
}

void fb_config_destroy(fb_config* config) { delete config; }

fb_status fb_config_set(fb_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(FB_ERROR_CONFIG, "null argument");
  }
  return guarded([&] { fedbench::harness::set_setting(config->settings, key, value); });
}

const char* fb_config_get(const fb_config* config, const char* key) {
  if (config == nullptr || key == nullptr) return nullptr;
  const auto it = config->settings.find(std::string_view(key));
  return it == config->settings.end() ? nullptr : it->second.c_str();
}

fb_status fb_config_load_file(fb_config* config, const char* path) {
  if (config == nullptr || path == nullptr) return fail(FB_ERROR_CONFIG, "null argument");
  return guarded([&] { fedbench::harness::load_settings_file(path, config->settings); });
}

fb_status fb_plan_create(const fb_config* config, fb_plan** out) {
  if (config == nullptr || out == nullptr) return fail(FB_ERROR_CONFIG, "null argument");
  return guarded([&] {
    auto plan = std::make_unique<fb_plan>();
    plan->experiments = fedbench::harness::resolve(config->settings);
    for (const auto& e : plan->experiments) plan->run_ids.push_back(e.run_id());
    *out = plan.release();
  });
}

void fb_plan_destroy(fb_plan* plan) { delete plan; }

size_t fb_plan_size(const fb_plan* plan) {
  return plan == nullptr ? 0 : plan->experiments.size();
}

const char* fb_plan_run_id(const fb_plan* plan, size_t index) {
  if (plan == nullptr || index >= plan->run_ids.size()) return nullptr;
  return plan->run_ids[index].c_str();
}

fb_status fb_plan_run(fb_plan* plan, size_t index, fb_run** out) {
  if (plan == nullptr || out == nullptr) return fail(FB_ERROR_CONFIG, "null argument");
  if (index >= plan->experiments.size()) return fail(FB_ERROR_CONFIG, "plan index out of range");
  return guarded([&] {
    auto run = std::make_unique<fb_run>();
    run->result = fedbench::harness::run_experiment(plan->experiments[index], plan->cache);
    run->csv_path = run->result.summary.csv_path.string();
    *out = run.release();
  });
}

void fb_run_destroy(fb_run* run) { delete run; }

const char* fb_run_id(const fb_run* run) {
  return run == nullptr ? nullptr : run->result.summary.run_id.c_str();
}

const char* fb_run_csv_path(const fb_run* run) {
  return run == nullptr ? nullptr : run->csv_path.c_str();
}

const char* fb_run_config_value(const fb_run* run, const char* key) {
  if (run == nullptr || key == nullptr) return nullptr;
  for (const auto& [k, v] : run->result.curve.config_echo) {
    if (k == key) return v.c_str();
  }
  return nullptr;
}

size_t fb_run_round_count(const fb_run* run) {
  return run == nullptr ? 0 : run->result.curve.records.size();
}

fb_status fb_run_round(const fb_run* run, size_t index, fb_round_record* out) {
  if (run == nullptr || out == nullptr) return fail(FB_ERROR_CONFIG, "null argument");
  const auto& records = run->result.curve.records;
  if (index >= records.size()) return fail(FB_ERROR_CONFIG, "round index out of range");
  const auto& r = records[index];
  *out = {r.round, r.train_loss, r.test_accuracy, r.bytes_up, r.bytes_down, r.wall_ms};
  return FB_OK;
}

fb_status fb_run_summary(const fb_run* run, fb_summary* out) {
  if (run == nullptr || out == nullptr) return fail(FB_ERROR_CONFIG, "null argument");
  const auto& s = run->result.summary;
  *out = {s.final_accuracy, s.best.accuracy, s.best.round,
          s.bytes.up,       s.bytes.down,    s.param_count};
  return FB_OK;
}

}  // extern "C"
