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

// Gate-based quantum autoencoders: the standard trash-state model and the
// noise-assisted model that refills the trash register with measured noise.

#pragma once

#include <vector>

#include "qaelab/circuit.hpp"
#include "qaelab/models.hpp"
#include "qaelab/qstate.hpp"

namespace qaelab {

enum class QaeVariant {
  /// Trains on the trash cost, decodes with |0...0> in B'.
  Standard,
  /// Trains on the diagonalization cost, decodes with the noise product state.
  NoiseAssisted,
};

/// Per-trash-qubit noise rates, each in [0, 1/2].
struct NoiseSchedule {
  std::vector<double> epsilon;
  /// How many raw rates fell outside [0, 1/2] and were clamped.
  int clamped = 0;
};

/// I_A (x) |0...0><0...0|_B
Matrix trash_projector(const Bipartition& part);

/// L_d = 1 - tr[(I_A (x) |0><0|_B) U rho U^dagger], in [0, 1].
double trash_cost(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                  const RealVector& theta);

/// L = tr[rho_B^out H_cost].
double diag_cost(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                 const RealVector& theta, const Hamiltonian& h_cost);

CircuitObjective trash_objective(const DensityMatrix& rho_in, const Bipartition& part,
                                 const ParamCircuit& c);
CircuitObjective diag_objective(const DensityMatrix& rho_in, const Bipartition& part,
                                const ParamCircuit& c, const Hamiltonian& h_cost);

/// Adam training of the encoder on the trash cost (Standard) or on the
/// diagonalization cost with default weights (NoiseAssisted).
TrainReport train_encoder(const DensityMatrix& rho_in, const Bipartition& part, QaeVariant variant,
                          const TrainConfig& cfg);

/// eps_j = 1/2 - tr[rho_B Z_j] / 2, clamped to [0, 1/2] with a warning.
NoiseSchedule noise_rates(const DensityMatrix& rho_b_out);

/// (x)_j diag(1 - eps_j, eps_j)
DensityMatrix noise_input_state(const NoiseSchedule& sched);

/// Single-qubit amplitude damping with decay probability 1 - exp(-t/T1).
DensityMatrix amplitude_damping(const DensityMatrix& rho, double t_over_t1);

/// Relaxation time t/T1 that turns |1><1| into X diag(1-eps, eps) X.
double damping_time(double epsilon);

/// diag(1 - eps, eps) prepared physically: X N(|1><1|) X with t = damping_time(eps).
DensityMatrix prepare_noise_qubit(double epsilon);

/// The decoder input built qubit by qubit through the damping channel.
DensityMatrix prepare_noise_input(const NoiseSchedule& sched);

/// U^dagger (rho_A^out (x) rho_B'^in) U.
DensityMatrix decode(const DensityMatrix& rho_a_out, const DensityMatrix& b_prime_in,
                     const ParamCircuit& c, const RealVector& theta);

/// Sum of the d_A largest eigenvalues of rho_in.
double qae_fidelity_bound(const DensityMatrix& rho_in, const Bipartition& part);

struct PipelineResult {
  DensityMatrix reconstructed;
  DensityMatrix compressed;
  TrainReport train;
  NoiseSchedule noise;
  double fidelity = 0.0;
  double input_entropy = 0.0;
  double output_entropy = 0.0;
};

/// Encoder output rho_out = U rho U^dagger, and its two marginals.
struct EncodedState {
  Matrix joint;
  DensityMatrix latent;
  DensityMatrix trash;
};

EncodedState encode(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                    const RealVector& theta);

/// Train, compress, measure the trash, prepare B', decode, score.
PipelineResult run_pipeline(const DensityMatrix& rho_in, const Bipartition& part,
                            QaeVariant variant, const TrainConfig& cfg);

/// Decode and score for an already trained encoder.
PipelineResult reconstruct(const DensityMatrix& rho_in, const Bipartition& part,
                           QaeVariant variant, const ParamCircuit& c, TrainReport train);

}  // namespace qaelab
