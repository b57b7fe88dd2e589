// Copyright 2026 The qae-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qae-lab: run autoencoder sweeps from JSON configs and verify the library.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qaelab/acceptance.hpp"
#include "qaelab/experiment.hpp"

#ifndef QAELAB_CONFIG_DIR
#define QAELAB_CONFIG_DIR "configs"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAcceptance = 2;

struct RunOptions {
  std::string config;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  bool no_timing = false;
};

int run_command(const RunOptions& opt) {
  qaelab::ExperimentConfig cfg;
  try {
    cfg = qaelab::load_config(opt.config);
    if (opt.seed_given) cfg.seed = opt.seed;
    if (opt.no_timing) cfg.timing = false;
  } catch (const qaelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto format =
      opt.format == "json" ? qaelab::OutputFormat::Json : qaelab::OutputFormat::Csv;
  const std::string path = opt.out.empty() ? cfg.output_path : opt.out;
  try {
    const auto results = qaelab::run_experiment(cfg, qaelab::resolve_workers(opt.workers));
    qaelab::write_experiment(results, format, path == "-" ? "" : path);
  } catch (const qaelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int configs_command(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) {
    std::cerr << "cannot list " << dir << ": " << ec.message() << "\n";
    return kExitConfig;
  }
  std::sort(files.begin(), files.end());
  int status = kExitOk;
  for (const auto& f : files) {
    try {
      const auto cfg = qaelab::load_config(f.string());
      std::string models;
      for (auto m : cfg.models) models += (models.empty() ? "" : ",") + std::string(qaelab::to_string(m));
      std::cout << f.filename().string() << "\t" << cfg.name << "\t[" << models << "] "
                << qaelab::to_string(cfg.system) << ", sweep " << qaelab::to_string(cfg.sweep)
                << " (" << cfg.grid.size() << " points)\n";
    } catch (const qaelab::ConfigError& e) {
      std::cout << f.filename().string() << "\tINVALID: " << e.what() << "\n";
      status = kExitConfig;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qae-lab: dense density-matrix experiments with quantum autoencoders"};
  app.require_subcommand(1);
  app.footer(qaelab::config_reference());

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run the sweep described by a config file");
  run_cmd->add_option("--config", run.config, "JSON config path")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--format", run.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output path (default: config output_path, else stdout)");
  auto* seed_opt = run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--workers", run.workers, "Parallel sweep points (QAE_LAB_WORKERS overrides)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--no-timing", run.no_timing, "Write wall_seconds as 0 for byte-stable output");

  std::vector<int> criteria;
  int verify_workers = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--criterion", criteria, "Criterion ids to run (default: all)")
      ->check(CLI::Range(1, qaelab::acceptance::kCriterionCount));
  verify_cmd->add_option("--workers", verify_workers, "Parallel sweep points")
      ->check(CLI::PositiveNumber);

  std::string config_dir = QAELAB_CONFIG_DIR;
  auto* configs_cmd = app.add_subcommand("configs", "List the shipped experiment configs");
  configs_cmd->add_option("--dir", config_dir, "Config directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) {
    run.seed_given = seed_opt->count() > 0;
    return run_command(run);
  }
  if (*verify_cmd) {
    const int failed =
        qaelab::acceptance::run_suite(criteria, std::cout, qaelab::resolve_workers(verify_workers));
    return failed == 0 ? kExitOk : kExitAcceptance;
  }
  if (*configs_cmd) return configs_command(config_dir);
  return kExitOk;
}
