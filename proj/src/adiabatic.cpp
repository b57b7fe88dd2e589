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

#include "qaelab/adiabatic.hpp"

#include <algorithm>
#include <cmath>

namespace qaelab {

AnnealSchedule::AnnealSchedule(Hamiltonian h_start, Hamiltonian h_end, double t_a, double dt)
    : h_start_(std::move(h_start)), h_end_(std::move(h_end)), t_a_(t_a), dt_(dt), steps_(0) {
  if (h_start_.dim() != h_end_.dim()) throw DimensionError("anneal endpoints differ in dimension");
  if (!(t_a_ > 0.0) || !std::isfinite(t_a_)) throw QaeError("annealing time must be positive");
  if (!(dt_ > 0.0) || dt_ > t_a_ * (1.0 + 1e-12)) throw QaeError("dt must lie in (0, t_a]");
  // Guard against t_a/dt landing a hair above an integer.
  const double ratio = t_a_ / dt_;
  steps_ = std::max(1, static_cast<int>(std::ceil(ratio - 1e-9 * ratio)));
}

AnnealSchedule AnnealSchedule::reversed() const { return AnnealSchedule(h_end_, h_start_, t_a_, dt_); }

Hamiltonian interpolate(const AnnealSchedule& sched, double t) {
  if (!(t >= 0.0 && t <= sched.t_a())) throw QaeError("interpolate: t outside [0, t_a]");
  const double s = t / sched.t_a();
  return Hamiltonian((1.0 - s) * sched.h_start().matrix() + s * sched.h_end().matrix());
}

Matrix step_propagator(const AnnealSchedule& sched, int k) {
  if (k < 0 || k >= sched.steps()) throw QaeError("step_propagator: step index out of range");
  const double t0 = k * sched.dt();
  const double h = std::min(sched.dt(), sched.t_a() - t0);
  const double s = (t0 + 0.5 * h) / sched.t_a();
  const Matrix hm = (1.0 - s) * sched.h_start().matrix() + s * sched.h_end().matrix();
  return hermitian_propagator(hm, h);
}

DensityMatrix evolve(const DensityMatrix& rho, const AnnealSchedule& sched) {
  if (rho.dim() != sched.h_start().dim()) throw DimensionError("evolve: state and schedule differ");
  Matrix m = rho.matrix();
  Matrix tmp(m.rows(), m.cols());
  for (int k = 0; k < sched.steps(); ++k) {
    const Matrix u = step_propagator(sched, k);
    tmp.noalias() = u * m;
    m.noalias() = tmp * u.adjoint();
  }
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix::unchecked(std::move(m));
}

AqaeReport aqae_run(const DensityMatrix& rho_in, const Hamiltonian& h, const Bipartition& part,
                    const Hamiltonian& h_l, double t_a, QaeVariant variant, double dt) {
  if (rho_in.dim() != part.dim() || h.dim() != part.dim() || h_l.dim() != part.dim()) {
    throw DimensionError("aqae_run: dimensions do not match the bipartition");
  }
  const AnnealSchedule encoder(h, h_l, t_a, dt);
  const DensityMatrix encoded = evolve(rho_in, encoder);
  DensityMatrix latent = partial_trace(encoded, part, Subsystem::A);
  DensityMatrix trash = partial_trace(encoded, part, Subsystem::B);

  NoiseSchedule sched;
  DensityMatrix b_prime = DensityMatrix::basis(part.n_b(), 0);
  if (variant == QaeVariant::NoiseAssisted) {
    sched = noise_rates(trash);
    b_prime = prepare_noise_input(sched);
  } else {
    sched.epsilon.assign(static_cast<std::size_t>(part.n_b()), 0.0);
  }
  const DensityMatrix joint = DensityMatrix::unchecked(kron(latent.matrix(), b_prime.matrix()));
  DensityMatrix out = evolve(joint, encoder.reversed());

  const double cost = expectation(trash, cost_hamiltonian(part.n_b()).matrix());
  AqaeReport report{std::move(out), std::move(latent), std::move(trash), std::move(sched)};
  report.trash_cost = cost;
  report.fidelity = fidelity(rho_in, report.reconstructed);
  report.input_entropy = von_neumann_entropy(rho_in);
  report.output_entropy = von_neumann_entropy(report.reconstructed);
  report.steps = encoder.steps();
  return report;
}

AqaeReport aqae_run(const Hamiltonian& h, double beta, const Bipartition& part,
                    const Hamiltonian& h_l, double t_a, QaeVariant variant, double dt) {
  return aqae_run(thermal_state(h, beta), h, part, h_l, t_a, variant, dt);
}

}  // namespace qaelab
