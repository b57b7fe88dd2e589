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

// Projected autoencoder for ensembles of pure states: the decoder input is the
// top eigenvector of the latent state next to the most probable trash string.

#pragma once

#include <string>
#include <vector>

#include "qaelab/circuit.hpp"
#include "qaelab/qstate.hpp"

namespace qaelab {

struct PureEnsemble {
  std::vector<Vector> states;
  /// Empty means uniform.
  std::vector<double> weights;

  /// Throws unless every state has unit norm (1e-10), the dimensions agree and
  /// the weights, when given, are non-negative and sum to 1.
  void validate() const;
  std::size_t size() const { return states.size(); }
  double weight(std::size_t i) const;
  Eigen::Index dim() const { return states.empty() ? 0 : states.front().size(); }

  /// n Haar-random pure states on n_qubits qubits, uniform weights.
  static PureEnsemble haar(int n_qubits, int n, Rng& rng);
};

/// Weighted average over the ensemble of L_p = 1 - sum_j tr[rho_B Z_j]^2.
double pqae_cost(const PureEnsemble& ens, const Bipartition& part, const ParamCircuit& c,
                 const RealVector& theta);
CircuitObjective pqae_objective(const PureEnsemble& ens, const Bipartition& part,
                                const ParamCircuit& c);
/// Weighted average of the trash cost over the ensemble.
CircuitObjective ensemble_trash_objective(const PureEnsemble& ens, const Bipartition& part,
                                          const ParamCircuit& c);

/// Computational-basis string with the largest diagonal weight, qubit 0 first.
/// Ties go to the lexicographically smallest string.
std::string most_probable_string(const DensityMatrix& rho_b);

enum class ProjectionMode { Exact, Variational };

struct ProjectionResult {
  Vector state;
  /// <v| rho_A |v> for the returned state.
  double overlap = 0.0;
  /// Parameters of W; empty in exact mode.
  RealVector theta_w;
  bool converged = true;
  /// Largest eigenvalue of rho_A, kept for diagnostics.
  double exact_overlap = 0.0;
};

/// Exact: the top eigenvector. Variational: minimize L_A = 1 - <0|W rho W^dagger|0>
/// with the depth-2 ansatz on rho's qubits and return W^dagger|0>.
ProjectionResult project_max_eigenstate(const DensityMatrix& rho_a, ProjectionMode mode,
                                        const TrainConfig& cfg = {});

struct PqaeMember {
  std::string trash_string;
  double projection_overlap = 0.0;
  /// |<psi| U^dagger (|v> (x) |m>)|^2
  double fidelity = 0.0;
  /// Same encoder decoded with rho_A (x) |0..0>.
  double plain_fidelity = 0.0;
  Vector reconstructed;
};

struct PqaeReport {
  TrainReport train;
  std::vector<PqaeMember> members;
  double mean_fidelity = 0.0;
  double mean_plain_fidelity = 0.0;
};

/// Per-state compress, project and decode with an already trained encoder.
PqaeReport pqae_reconstruct(const PureEnsemble& ens, const Bipartition& part,
                            const ParamCircuit& c, TrainReport train,
                            ProjectionMode mode = ProjectionMode::Exact,
                            const TrainConfig& projection_cfg = {});

/// Train on the averaged L_p, then pqae_reconstruct.
PqaeReport pqae_pipeline(const PureEnsemble& ens, const Bipartition& part, const TrainConfig& cfg,
                         ProjectionMode mode = ProjectionMode::Exact);

struct EnsembleQaeReport {
  TrainReport train;
  std::vector<double> fidelities;
  double mean_fidelity = 0.0;
};

/// Standard autoencoder trained on the ensemble-averaged trash cost, decoded
/// with rho_A (x) |0..0>.
EnsembleQaeReport ensemble_qae(const PureEnsemble& ens, const Bipartition& part,
                               const TrainConfig& cfg);

}  // namespace qaelab
