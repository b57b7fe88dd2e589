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

// Config-driven sweeps over the autoencoder models and their result tables.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qaelab/circuit.hpp"
#include "qaelab/models.hpp"
#include "qaelab/pqae.hpp"

namespace qaelab {

/// Invalid configuration; the message starts with the offending key path.
class ConfigError : public QaeError {
 public:
  ConfigError(const std::string& key_path, const std::string& what)
      : QaeError(key_path + ": " + what), key_path_(key_path) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

enum class ModelKind { Qae, Nqae, Aqae, Naqae, Pqae };
enum class SystemKind { Tfim, Werner, Random, Custom };
enum class SweepParameter { Beta, Alpha, AnnealTime, Iterations, EnsembleSize };

std::string_view to_string(ModelKind m);
std::string_view to_string(SystemKind s);
std::string_view to_string(SweepParameter p);

struct SystemParams {
  double beta = 1.0;
  double alpha = 0.0;
  double j_coupling = 1.0;
  double g_field = 1.0;
  /// Rank of the random mixed state; 0 means full rank.
  int rank = 0;
  /// Random system only: use Haar-random pure ensembles instead of one mixed state.
  bool ensemble = false;
  int ensemble_size = 4;
  ProjectionMode projection = ProjectionMode::Exact;
  /// Custom system only: the Hamiltonian whose thermal state is compressed.
  std::optional<Matrix> hamiltonian;
};

struct AnnealParams {
  double t_a = 1000.0;
  double dt = 0.1;
  LatentKind latent = LatentKind::Cost;
};

struct ExperimentConfig {
  std::string name;
  std::vector<ModelKind> models;
  SystemKind system = SystemKind::Tfim;
  int n_a = 0;
  int n_b = 0;
  SweepParameter sweep = SweepParameter::Beta;
  std::vector<double> grid;
  std::uint64_t seed = 0;
  TrainConfig training;
  AnnealParams annealing;
  SystemParams params;
  std::string output_path;
  /// When false the wall_seconds column is written as 0.
  bool timing = true;
};

/// Parses and validates a JSON config; defaults are filled for absent keys.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// Range and compatibility checks, also applied by parse_config.
void validate(const ExperimentConfig& cfg);
/// Human-readable description of every key and its default.
std::string config_reference();

struct ResultRow {
  double sweep_value = 0.0;
  double fidelity = 0.0;
  double input_entropy = 0.0;
  double output_entropy = 0.0;
  double final_loss = 0.0;
  std::vector<double> epsilons;
  int iterations = 0;
  double wall_seconds = 0.0;
  bool converged = false;

  bool operator==(const ResultRow&) const = default;
};

struct ModelResults {
  ModelKind model = ModelKind::Qae;
  std::vector<ResultRow> rows;
};

/// Seed of sweep point `index`; independent of execution order.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// One model over the whole grid, `workers` points at a time. Rows are sorted
/// by sweep value. A point that throws yields a row with converged = false.
std::vector<ResultRow> run_model(const ExperimentConfig& cfg, ModelKind model, int workers = 1);
/// Every configured model in order.
std::vector<ModelResults> run_experiment(const ExperimentConfig& cfg, int workers = 1);

/// Worker count: QAE_LAB_WORKERS when set, otherwise `requested`, at least 1.
int resolve_workers(int requested);

enum class OutputFormat { Csv, Json };

inline constexpr std::string_view kCsvHeader =
    "sweep_value,fidelity,input_entropy,output_entropy,final_loss,epsilons,iterations,"
    "wall_seconds,converged";

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format);
/// Writes rows to `path`; throws QaeError when the file cannot be written.
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);
std::vector<ResultRow> parse_results_json(std::string_view text);

/// Single model: `path` as given. Several models: one file per model with the
/// model name inserted before the extension. Empty path writes to stdout, one
/// block per model preceded by "# model: <name>" when there are several.
void write_experiment(const std::vector<ModelResults>& results, OutputFormat format,
                      const std::string& path);
std::string model_output_path(const std::string& path, ModelKind model);

}  // namespace qaelab
