// Copyright (c) 2026, pmatch developers
// SPDX-License-Identifier: Apache-2.0
//
// pmatch command line: run experiments, compare traces, dump datasets.
// Talks to the library only through the C interface.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmatch.h"

namespace {

struct ConfigDeleter {
  void operator()(pm_config* c) const { pm_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<pm_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { pm_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Machine-readable failure record on stderr; the exit code is the status.
int report_failure(pm_status status) {
  nlohmann::json err = {{"error", {{"status", pm_status_name(status)},
                                   {"code", static_cast<int>(status)},
                                   {"message", pm_last_error()}}}};
  std::fprintf(stderr, "%s\n", err.dump().c_str());
  return static_cast<int>(status);
}

pm_status build_config(const std::string& path, const std::vector<std::string>& overrides, long long seed,
                       ConfigPtr& out) {
  pm_config* raw = nullptr;
  pm_status st = path.empty() ? pm_config_create(&raw) : pm_config_load(path.c_str(), &raw);
  if (st != PM_OK) return st;
  out.reset(raw);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      // Route through the library so the error record looks the same.
      st = pm_config_set(out.get(), kv.c_str(), "");
      if (st != PM_OK) return st;
      continue;
    }
    st = pm_config_set(out.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != PM_OK) return st;
  }
  if (seed >= 0) {
    st = pm_config_set(out.get(), "seed", std::to_string(seed).c_str());
    if (st != PM_OK) return st;
  }
  return PM_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percentile-threshold pseudo-labeling experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pm_version()));

  std::string config_path;
  std::string out_path;
  long long seed = -1;
  std::vector<std::string> overrides;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Train one configuration and write its trace");
  run->add_option("config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_path, "Trace output path (JSON lines)")->required();
  run->add_option("--set", overrides, "Override a config key (key=value); repeatable");
  run->add_flag("-q,--quiet", quiet, "Do not print the final report");

  std::vector<std::string> traces;
  bool as_json = false;
  auto* compare = app.add_subcommand("compare", "Tabulate finished traces against the first run's arm");
  compare->add_option("traces", traces, "Trace files")->required()->check(CLI::ExistingFile);
  compare->add_flag("--json", as_json, "Emit JSON instead of a table");

  std::string data_config;
  auto* gen = app.add_subcommand("gen-data", "Write the synthetic dataset of a configuration");
  gen->add_option("config", data_config, "Config file; defaults when omitted")->check(CLI::ExistingFile);
  gen->add_option("--seed", seed, "Override the config seed")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out_path, "Dataset dump path")->required();
  gen->add_option("--set", overrides, "Override a config key (key=value); repeatable");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    ConfigPtr cfg;
    if (auto st = build_config(config_path, overrides, seed, cfg); st != PM_OK) return report_failure(st);
    char* report = nullptr;
    if (auto st = pm_run_experiment(cfg.get(), out_path.c_str(), &report); st != PM_OK) return report_failure(st);
    OwnedString owned(report);
    if (!quiet) std::printf("%s\n", owned.get());
    return 0;
  }

  if (*compare) {
    std::vector<const char*> paths;
    for (const auto& t : traces) paths.push_back(t.c_str());
    char* text = nullptr;
    if (auto st = pm_compare_traces(paths.data(), paths.size(), as_json ? 1 : 0, &text); st != PM_OK) {
      return report_failure(st);
    }
    OwnedString owned(text);
    std::printf("%s", owned.get());
    if (as_json) std::printf("\n");
    return 0;
  }

  if (*gen) {
    ConfigPtr cfg;
    if (auto st = build_config(data_config, overrides, seed, cfg); st != PM_OK) return report_failure(st);
    if (auto st = pm_generate_dataset(cfg.get(), out_path.c_str()); st != PM_OK) return report_failure(st);
    return 0;
  }
  return 0;
}
