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

#include "qaelab/pqae.hpp"

#include <cmath>

#include "qaelab/autoencoder.hpp"

namespace qaelab {

namespace {

void check_ensemble(const PureEnsemble& ens, const Bipartition& part) {
  ens.validate();
  if (ens.dim() != part.dim()) throw DimensionError("ensemble dimension does not match bipartition");
}

std::vector<Matrix> ensemble_columns(const PureEnsemble& ens) {
  std::vector<Matrix> cols;
  cols.reserve(ens.size());
  for (const Vector& psi : ens.states) cols.emplace_back(psi);
  return cols;
}

std::vector<double> ensemble_weights(const PureEnsemble& ens) {
  std::vector<double> w(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) w[i] = ens.weight(i);
  return w;
}

Vector evolve_vector(Vector psi, const ParamCircuit& c, const RealVector& theta, bool inverse) {
  Matrix col = std::move(psi);
  const Matrix u = circuit_unitary(c, theta);
  return inverse ? Vector(u.adjoint() * col) : Vector(u * col);
}

// rho_A = tr_B |phi><phi| and rho_B = tr_A |phi><phi| from the d_A x d_B reshape.
std::pair<DensityMatrix, DensityMatrix> marginals(const Vector& phi, const Bipartition& part) {
  const Eigen::Map<const Matrix> m(phi.data(), part.d_b(), part.d_a());
  // Column a of the map holds the amplitudes phi(a * d_B + b).
  Matrix rho_a = (m.transpose() * m.conjugate());
  Matrix rho_b = (m * m.adjoint());
  return {DensityMatrix::unchecked(std::move(rho_a)), DensityMatrix::unchecked(std::move(rho_b))};
}

Eigen::Index index_of(const std::string& bits) {
  Eigen::Index idx = 0;
  for (char ch : bits) idx = 2 * idx + (ch == '1' ? 1 : 0);
  return idx;
}

}  // namespace

void PureEnsemble::validate() const {
  if (states.empty()) throw QaeError("ensemble is empty");
  const Eigen::Index d = states.front().size();
  if (qubit_count(d) < 1) throw DimensionError("ensemble states need a power-of-two dimension");
  for (const Vector& psi : states) {
    if (psi.size() != d) throw DimensionError("ensemble states differ in dimension");
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidStateError("ensemble state is not normalized");
  }
  if (weights.empty()) return;
  if (weights.size() != states.size()) throw DimensionError("one weight per ensemble state required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw QaeError("ensemble weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw QaeError("ensemble weights must sum to 1");
}

double PureEnsemble::weight(std::size_t i) const {
  return weights.empty() ? 1.0 / static_cast<double>(states.size()) : weights.at(i);
}

PureEnsemble PureEnsemble::haar(int n_qubits, int n, Rng& rng) {
  if (n < 1) throw QaeError("ensemble size must be >= 1");
  PureEnsemble ens;
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  for (int i = 0; i < n; ++i) ens.states.push_back(random_pure_state(d, rng));
  return ens;
}

CircuitObjective pqae_objective(const PureEnsemble& ens, const Bipartition& part,
                                const ParamCircuit& c) {
  check_ensemble(ens, part);
  if (c.n_qubits != part.n_qubits()) throw DimensionError("circuit width does not match bipartition");
  std::vector<Matrix> obs;
  const Matrix id_a = Matrix::Identity(part.d_a(), part.d_a());
  for (int j = 0; j < part.n_b(); ++j) obs.push_back(kron(id_a, embed_single(pauli_z(), j, part.n_b())));
  return CircuitObjective(c, ensemble_columns(ens), ensemble_weights(ens), std::move(obs),
                          Combiner::one_minus_sum_squares());
}

CircuitObjective ensemble_trash_objective(const PureEnsemble& ens, const Bipartition& part,
                                          const ParamCircuit& c) {
  check_ensemble(ens, part);
  if (c.n_qubits != part.n_qubits()) throw DimensionError("circuit width does not match bipartition");
  return CircuitObjective(c, ensemble_columns(ens), ensemble_weights(ens), {trash_projector(part)},
                          Combiner::linear(1.0, -1.0));
}

double pqae_cost(const PureEnsemble& ens, const Bipartition& part, const ParamCircuit& c,
                 const RealVector& theta) {
  return pqae_objective(ens, part, c).value(theta);
}

std::string most_probable_string(const DensityMatrix& rho_b) {
  const int n = rho_b.n_qubits();
  const Matrix& m = rho_b.matrix();
  Eigen::Index best = 0;
  double best_p = m(0, 0).real();
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    const double p = m(i, i).real();
    if (p > best_p + 1e-12 * std::abs(best_p)) {
      best = i;
      best_p = p;
    }
  }
  std::string bits(static_cast<std::size_t>(n), '0');
  for (int j = 0; j < n; ++j) {
    if ((best >> (n - 1 - j)) & 1) bits[static_cast<std::size_t>(j)] = '1';
  }
  return bits;
}

ProjectionResult project_max_eigenstate(const DensityMatrix& rho_a, ProjectionMode mode,
                                        const TrainConfig& cfg) {
  const Spectrum spec = spectral_decomposition(rho_a);
  ProjectionResult result;
  result.exact_overlap = spec.eigenvalues(0);
  if (mode == ProjectionMode::Exact) {
    result.state = spec.eigenvectors.col(0);
    result.overlap = expectation(rho_a, result.state * result.state.adjoint());
    return result;
  }

  const int n = rho_a.n_qubits();
  Matrix zero = Matrix::Zero(rho_a.dim(), rho_a.dim());
  zero(0, 0) = 1.0;
  TrainConfig wcfg = cfg;
  wcfg.depth_p = 2;
  wcfg.adaptive_depth = false;
  const ObjectiveFactory factory = [&](const ParamCircuit& c) {
    return CircuitObjective(c, {rho_a.matrix()}, {1.0}, {zero}, Combiner::linear(1.0, -1.0));
  };
  TrainReport train = train_circuit(n, factory, wcfg);
  const ParamCircuit w = build_ansatz(n, 2);
  Vector e0 = Vector::Zero(rho_a.dim());
  e0(0) = 1.0;
  result.state = evolve_vector(std::move(e0), w, train.final_theta, true);
  result.overlap = expectation(rho_a, result.state * result.state.adjoint());
  result.theta_w = std::move(train.final_theta);
  result.converged = train.converged || !cfg.early_stop;
  return result;
}

PqaeReport pqae_reconstruct(const PureEnsemble& ens, const Bipartition& part,
                            const ParamCircuit& c, TrainReport train, ProjectionMode mode,
                            const TrainConfig& projection_cfg) {
  check_ensemble(ens, part);
  PqaeReport report;
  const Matrix u = circuit_unitary(c, train.final_theta);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const Vector& psi = ens.states[i];
    const Vector phi = u * psi;
    auto [rho_a, rho_b] = marginals(phi, part);

    PqaeMember member;
    member.trash_string = most_probable_string(rho_b);
    const ProjectionResult proj = project_max_eigenstate(rho_a, mode, projection_cfg);
    member.projection_overlap = proj.overlap;
    Vector m = Vector::Zero(part.d_b());
    m(index_of(member.trash_string)) = 1.0;
    member.reconstructed = u.adjoint() * kron(proj.state, m);
    member.fidelity = std::norm(psi.dot(member.reconstructed));

    // <phi| rho_A (x) |0><0| |phi> = <phi_0| rho_A |phi_0>, phi_0 the b = 0 slice.
    Vector phi0(part.d_a());
    for (Eigen::Index a = 0; a < part.d_a(); ++a) phi0(a) = phi(a * part.d_b());
    member.plain_fidelity = std::max(0.0, phi0.dot(rho_a.matrix() * phi0).real());

    report.mean_fidelity += ens.weight(i) * member.fidelity;
    report.mean_plain_fidelity += ens.weight(i) * member.plain_fidelity;
    report.members.push_back(std::move(member));
  }
  report.train = std::move(train);
  return report;
}

PqaeReport pqae_pipeline(const PureEnsemble& ens, const Bipartition& part, const TrainConfig& cfg,
                         ProjectionMode mode) {
  check_ensemble(ens, part);
  const ObjectiveFactory factory = [&](const ParamCircuit& c) { return pqae_objective(ens, part, c); };
  TrainReport train = train_circuit(part.n_qubits(), factory, cfg);
  const ParamCircuit c = build_ansatz(part.n_qubits(), train.depth_p);
  return pqae_reconstruct(ens, part, c, std::move(train), mode, cfg);
}

EnsembleQaeReport ensemble_qae(const PureEnsemble& ens, const Bipartition& part,
                               const TrainConfig& cfg) {
  check_ensemble(ens, part);
  const ObjectiveFactory factory = [&](const ParamCircuit& c) {
    return ensemble_trash_objective(ens, part, c);
  };
  EnsembleQaeReport report;
  report.train = train_circuit(part.n_qubits(), factory, cfg);
  const ParamCircuit c = build_ansatz(part.n_qubits(), report.train.depth_p);
  const Matrix u = circuit_unitary(c, report.train.final_theta);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const Vector phi = u * ens.states[i];
    const DensityMatrix rho_a = marginals(phi, part).first;
    Vector phi0(part.d_a());
    for (Eigen::Index a = 0; a < part.d_a(); ++a) phi0(a) = phi(a * part.d_b());
    const double f = std::max(0.0, phi0.dot(rho_a.matrix() * phi0).real());
    report.fidelities.push_back(f);
    report.mean_fidelity += ens.weight(i) * f;
  }
  return report;
}

}  // namespace qaelab
