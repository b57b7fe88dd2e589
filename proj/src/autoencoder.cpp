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

#include "qaelab/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qaelab/log.hpp"

namespace qaelab {

namespace {

void check_dims(const DensityMatrix& rho, const Bipartition& part, const ParamCircuit& c) {
  if (rho.dim() != part.dim()) throw DimensionError("state dimension does not match bipartition");
  if (c.n_qubits != part.n_qubits()) {
    throw DimensionError("circuit width does not match bipartition");
  }
}

}  // namespace

Matrix trash_projector(const Bipartition& part) {
  Matrix zero_b = Matrix::Zero(part.d_b(), part.d_b());
  zero_b(0, 0) = 1.0;
  return kron(Matrix::Identity(part.d_a(), part.d_a()), zero_b);
}

double trash_cost(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                  const RealVector& theta) {
  return trash_objective(rho_in, part, c).value(theta);
}

double diag_cost(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                 const RealVector& theta, const Hamiltonian& h_cost) {
  return diag_objective(rho_in, part, c, h_cost).value(theta);
}

CircuitObjective trash_objective(const DensityMatrix& rho_in, const Bipartition& part,
                                 const ParamCircuit& c) {
  check_dims(rho_in, part, c);
  return CircuitObjective(c, {rho_in.matrix()}, {1.0}, {trash_projector(part)},
                          Combiner::linear(1.0, -1.0));
}

CircuitObjective diag_objective(const DensityMatrix& rho_in, const Bipartition& part,
                                const ParamCircuit& c, const Hamiltonian& h_cost) {
  check_dims(rho_in, part, c);
  if (h_cost.dim() != part.d_b()) throw DimensionError("H_cost must act on the trash register");
  Matrix obs = kron(Matrix::Identity(part.d_a(), part.d_a()), h_cost.matrix());
  return CircuitObjective(c, {rho_in.matrix()}, {1.0}, {std::move(obs)},
                          Combiner::linear(0.0, 1.0));
}

TrainReport train_encoder(const DensityMatrix& rho_in, const Bipartition& part, QaeVariant variant,
                          const TrainConfig& cfg) {
  if (rho_in.dim() != part.dim()) throw DimensionError("state dimension does not match bipartition");
  const Hamiltonian h_cost = cost_hamiltonian(part.n_b());
  ObjectiveFactory factory = [&](const ParamCircuit& c) {
    return variant == QaeVariant::Standard ? trash_objective(rho_in, part, c)
                                           : diag_objective(rho_in, part, c, h_cost);
  };
  return train_circuit(part.n_qubits(), factory, cfg);
}

NoiseSchedule noise_rates(const DensityMatrix& rho_b_out) {
  const int n_b = rho_b_out.n_qubits();
  if (n_b < 1) throw DimensionError("noise_rates: trash state must have at least one qubit");
  NoiseSchedule sched;
  const Matrix& rho = rho_b_out.matrix();
  for (int j = 0; j < n_b; ++j) {
    // tr[rho Z_j] from the diagonal: +1 where bit j is 0, -1 where it is 1.
    double z = 0.0;
    for (Eigen::Index b = 0; b < rho.rows(); ++b) {
      const bool bit = (b >> (n_b - 1 - j)) & 1;
      z += (bit ? -1.0 : 1.0) * rho(b, b).real();
    }
    const double raw = 0.5 - 0.5 * z;
    double eps = raw;
    if (raw < 0.0 || raw > 0.5) {
      eps = std::clamp(raw, 0.0, 0.5);
      // Rounding noise around 0 and 1/2 is not worth reporting.
      if (raw < -1e-9 || raw > 0.5 + 1e-9) {
        sched.clamped += 1;
        std::ostringstream os;
        os << "noise rate for trash qubit " << (j + 1) << " was " << raw
           << ", clamped to [0, 1/2]; the encoder likely left that qubit inverted";
        log_warning(os.str());
      }
    }
    sched.epsilon.push_back(eps);
  }
  return sched;
}

DensityMatrix noise_input_state(const NoiseSchedule& sched) {
  if (sched.epsilon.empty()) throw DimensionError("noise schedule is empty");
  Matrix out = Matrix::Ones(1, 1);
  for (double eps : sched.epsilon) {
    if (eps < 0.0 || eps > 0.5 + 1e-9) throw QaeError("noise rate outside [0, 1/2]");
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0 - eps;
    sigma(1, 1) = eps;
    out = kron(out, sigma);
  }
  return DensityMatrix::unchecked(std::move(out));
}

DensityMatrix amplitude_damping(const DensityMatrix& rho, double t_over_t1) {
  if (rho.dim() != 2) throw DimensionError("amplitude_damping acts on a single qubit");
  if (!(t_over_t1 >= 0.0)) throw QaeError("amplitude_damping: t/T1 must be non-negative");
  const double gamma = -std::expm1(-t_over_t1);
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  const Matrix& r = rho.matrix();
  return DensityMatrix::unchecked(k0 * r * k0.adjoint() + k1 * r * k1.adjoint());
}

double damping_time(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw QaeError("damping_time: epsilon must be in [0, 1)");
  return -std::log1p(-epsilon);
}

DensityMatrix prepare_noise_qubit(double epsilon) {
  const DensityMatrix damped = amplitude_damping(DensityMatrix::basis(1, 1), damping_time(epsilon));
  const Matrix x = pauli_x();
  return DensityMatrix::unchecked(x * damped.matrix() * x);
}

DensityMatrix prepare_noise_input(const NoiseSchedule& sched) {
  if (sched.epsilon.empty()) throw DimensionError("noise schedule is empty");
  Matrix out = Matrix::Ones(1, 1);
  for (double eps : sched.epsilon) out = kron(out, prepare_noise_qubit(eps).matrix());
  return DensityMatrix::unchecked(std::move(out));
}

DensityMatrix decode(const DensityMatrix& rho_a_out, const DensityMatrix& b_prime_in,
                     const ParamCircuit& c, const RealVector& theta) {
  Matrix joint = kron(rho_a_out.matrix(), b_prime_in.matrix());
  if (joint.rows() != (Eigen::Index{1} << c.n_qubits)) {
    throw DimensionError("decode: latent and B' dimensions do not match the circuit");
  }
  apply_circuit_inverse(joint, c, theta);
  return DensityMatrix::unchecked(std::move(joint));
}

double qae_fidelity_bound(const DensityMatrix& rho_in, const Bipartition& part) {
  if (rho_in.dim() != part.dim()) throw DimensionError("state dimension does not match bipartition");
  const RealVector p = spectral_decomposition(rho_in).eigenvalues;
  return std::min(1.0, p.head(part.d_a()).sum());
}

EncodedState encode(const DensityMatrix& rho_in, const Bipartition& part, const ParamCircuit& c,
                    const RealVector& theta) {
  check_dims(rho_in, part, c);
  Matrix joint = rho_in.matrix();
  apply_circuit(joint, c, theta);
  DensityMatrix latent = DensityMatrix::unchecked(partial_trace(joint, part, Subsystem::A));
  DensityMatrix trash = DensityMatrix::unchecked(partial_trace(joint, part, Subsystem::B));
  return {std::move(joint), std::move(latent), std::move(trash)};
}

PipelineResult reconstruct(const DensityMatrix& rho_in, const Bipartition& part,
                           QaeVariant variant, const ParamCircuit& c, TrainReport train) {
  const EncodedState enc = encode(rho_in, part, c, train.final_theta);
  NoiseSchedule sched;
  DensityMatrix b_prime = DensityMatrix::basis(part.n_b(), 0);
  if (variant == QaeVariant::NoiseAssisted) {
    sched = noise_rates(enc.trash);
    b_prime = prepare_noise_input(sched);
  } else {
    sched.epsilon.assign(static_cast<std::size_t>(part.n_b()), 0.0);
  }
  DensityMatrix out = decode(enc.latent, b_prime, c, train.final_theta);
  const double fid = fidelity(rho_in, out);
  const double s_in = von_neumann_entropy(rho_in);
  const double s_out = von_neumann_entropy(out);
  return PipelineResult{std::move(out), enc.latent, std::move(train), std::move(sched),
                        fid,            s_in,       s_out};
}

PipelineResult run_pipeline(const DensityMatrix& rho_in, const Bipartition& part,
                            QaeVariant variant, const TrainConfig& cfg) {
  TrainReport train = train_encoder(rho_in, part, variant, cfg);
  const ParamCircuit c = build_ansatz(part.n_qubits(), train.depth_p);
  return reconstruct(rho_in, part, variant, c, std::move(train));
}

}  // namespace qaelab
