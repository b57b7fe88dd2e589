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

#pragma once

#include <functional>
#include <vector>

#include "qaelab/qstate.hpp"

namespace qaelab {

/// Dense Hermitian operator on a power-of-two dimension.
class Hamiltonian {
 public:
  /// Throws unless m is Hermitian to 1e-12; the stored matrix is symmetrized.
  explicit Hamiltonian(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int n_qubits() const { return qubit_count(m_.rows()); }

 private:
  Matrix m_;
};

/// f(H) through the eigendecomposition, for real-valued f.
Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f);
/// exp(-i H t) through the eigendecomposition.
Matrix hermitian_propagator(const Matrix& h, double t);

/// -J (sum_j Z_j Z_{j+1} + g sum_j X_j) on an open chain.
Hamiltonian tfim_hamiltonian(int n, double j_coupling, double g_field);

/// exp(-beta H) / tr exp(-beta H).
DensityMatrix thermal_state(const Hamiltonian& h, double beta);

/// r_j = 1 / 2^(j-1), j = 1..n_B.
RealVector default_cost_weights(int n_b);

/// 1 - sum_j r_j Z_j on n_B qubits; diagonal in the computational basis.
Hamiltonian cost_hamiltonian(int n_b, const RealVector& r);
inline Hamiltonian cost_hamiltonian(int n_b) { return cost_hamiltonian(n_b, default_cost_weights(n_b)); }

enum class LatentKind {
  /// I_A (x) (1 - sum_j r_j Z_j)
  Cost,
  /// I_A (x) (-sum_j Z_j - sum_j Z_j Z_{j+1}); larger gap above the latent space.
  Ising,
};

Hamiltonian latent_hamiltonian(int n_a, int n_b, LatentKind kind = LatentKind::Cost);

/// F = sum_kj |kj><jk| on C^d (x) C^d.
Matrix swap_operator(Eigen::Index d);

/// (I - alpha F) / (d^2 - d alpha), alpha in [-1, 1].
DensityMatrix werner_state(Eigen::Index d, double alpha);

/// H_alpha = -ln rho_W(alpha), so exp(-H_alpha) = rho_W(alpha). Needs -1 < alpha < 1.
Hamiltonian werner_log_hamiltonian(Eigen::Index d, double alpha);

}  // namespace qaelab
