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

// Annealing-based autoencoders. The encoder drags the eigenbasis of H onto the
// eigenbasis of a latent Hamiltonian; the decoder runs the path backwards.

#pragma once

#include "qaelab/autoencoder.hpp"
#include "qaelab/models.hpp"
#include "qaelab/qstate.hpp"

namespace qaelab {

inline constexpr double kDefaultAnnealStep = 0.1;

/// H(t) = (1 - t/t_a) h_start + (t/t_a) h_end on [0, t_a].
class AnnealSchedule {
 public:
  /// Throws on mismatched dimensions, non-positive t_a or dt, or dt > t_a.
  AnnealSchedule(Hamiltonian h_start, Hamiltonian h_end, double t_a, double dt = kDefaultAnnealStep);

  const Hamiltonian& h_start() const { return h_start_; }
  const Hamiltonian& h_end() const { return h_end_; }
  double t_a() const { return t_a_; }
  double dt() const { return dt_; }
  /// ceil(t_a / dt); the last step is shortened so the steps add up to t_a.
  int steps() const { return steps_; }
  /// The same path traversed from h_end back to h_start.
  AnnealSchedule reversed() const;

 private:
  Hamiltonian h_start_;
  Hamiltonian h_end_;
  double t_a_;
  double dt_;
  int steps_;
};

Hamiltonian interpolate(const AnnealSchedule& sched, double t);

/// exp(-i H(t_k + h_k/2) h_k) for step k, with h_k = dt except possibly the last.
Matrix step_propagator(const AnnealSchedule& sched, int k);

/// Midpoint piecewise-constant propagation of rho along the schedule.
DensityMatrix evolve(const DensityMatrix& rho, const AnnealSchedule& sched);

struct AqaeReport {
  DensityMatrix reconstructed;
  DensityMatrix compressed;
  /// Trash marginal after the encoder anneal.
  DensityMatrix trash;
  NoiseSchedule noise;
  /// tr[rho_B H_cost] of the trash marginal, default weights.
  double trash_cost = 0.0;
  double fidelity = 0.0;
  double input_entropy = 0.0;
  double output_entropy = 0.0;
  /// Integrator steps per anneal (encoder and decoder each).
  int steps = 0;
};

/// Anneal rho_beta(h) to h_l, keep A, refill B' with |0..0> (Standard) or with the
/// measured noise product (NoiseAssisted), anneal back and score.
AqaeReport aqae_run(const Hamiltonian& h, double beta, const Bipartition& part,
                    const Hamiltonian& h_l, double t_a, QaeVariant variant,
                    double dt = kDefaultAnnealStep);

/// Same pipeline for an arbitrary input state prepared elsewhere.
AqaeReport aqae_run(const DensityMatrix& rho_in, const Hamiltonian& h, const Bipartition& part,
                    const Hamiltonian& h_l, double t_a, QaeVariant variant,
                    double dt = kDefaultAnnealStep);

}  // namespace qaelab
