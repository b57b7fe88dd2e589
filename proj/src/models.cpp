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

#include "qaelab/models.hpp"

#include <cmath>
#include <sstream>

namespace qaelab {

Hamiltonian::Hamiltonian(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || qubit_count(m_.rows()) < 0) {
    throw DimensionError("Hamiltonian must be square with power-of-two dimension");
  }
  if (const double defect = hermiticity_defect(m_); defect > 1e-12) {
    std::ostringstream os;
    os << "Hamiltonian is not Hermitian (" << defect << ")";
    throw QaeError(os.str());
  }
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw QaeError("eigensolver failed to converge");
  const RealVector fx = solver.eigenvalues().unaryExpr(f);
  const Matrix& v = solver.eigenvectors();
  return v * fx.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix hermitian_propagator(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw QaeError("eigensolver failed to converge");
  const RealVector& ev = solver.eigenvalues();
  Vector phases(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) phases(i) = std::polar(1.0, -ev(i) * t);
  const Matrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Hamiltonian tfim_hamiltonian(int n, double j_coupling, double g_field) {
  if (n < 2) throw DimensionError("tfim_hamiltonian: n must be >= 2");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  const Matrix z = pauli_z();
  const Matrix x = pauli_x();
  for (int j = 0; j + 1 < n; ++j) h -= j_coupling * embed_single(z, j, n) * embed_single(z, j + 1, n);
  for (int j = 0; j < n; ++j) h -= j_coupling * g_field * embed_single(x, j, n);
  return Hamiltonian(std::move(h));
}

DensityMatrix thermal_state(const Hamiltonian& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw QaeError("thermal_state: beta must be finite and non-negative");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  const RealVector& ev = solver.eigenvalues();
  const double shift = ev.minCoeff();
  RealVector w = (-beta * (ev.array() - shift)).exp();
  w /= w.sum();
  const Matrix& v = solver.eigenvectors();
  Matrix rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::unchecked(std::move(rho));
}

RealVector default_cost_weights(int n_b) {
  RealVector r(n_b);
  for (int j = 0; j < n_b; ++j) r(j) = std::ldexp(1.0, -j);
  return r;
}

Hamiltonian cost_hamiltonian(int n_b, const RealVector& r) {
  if (n_b < 1) throw DimensionError("cost_hamiltonian: n_B must be >= 1");
  if (r.size() != n_b) throw DimensionError("cost_hamiltonian: need one weight per trash qubit");
  const Eigen::Index dim = Eigen::Index{1} << n_b;
  Matrix h = Matrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double value = 1.0;
    for (int j = 0; j < n_b; ++j) {
      const bool bit = (b >> (n_b - 1 - j)) & 1;
      value -= r(j) * (bit ? -1.0 : 1.0);
    }
    h(b, b) = value;
  }
  return Hamiltonian(std::move(h));
}

Hamiltonian latent_hamiltonian(int n_a, int n_b, LatentKind kind) {
  if (n_a < 1) throw DimensionError("latent_hamiltonian: n_A must be >= 1");
  const Eigen::Index da = Eigen::Index{1} << n_a;
  const Matrix id = Matrix::Identity(da, da);
  if (kind == LatentKind::Cost) return Hamiltonian(kron(id, cost_hamiltonian(n_b).matrix()));

  const Eigen::Index db = Eigen::Index{1} << n_b;
  Matrix hb = Matrix::Zero(db, db);
  const Matrix z = pauli_z();
  for (int j = 0; j < n_b; ++j) hb -= embed_single(z, j, n_b);
  for (int j = 0; j + 1 < n_b; ++j) hb -= embed_single(z, j, n_b) * embed_single(z, j + 1, n_b);
  return Hamiltonian(kron(id, hb));
}

Matrix swap_operator(Eigen::Index d) {
  if (d < 2) throw DimensionError("swap_operator: d must be >= 2");
  Matrix f = Matrix::Zero(d * d, d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) f(j * d + k, k * d + j) = 1.0;
  }
  return f;
}

DensityMatrix werner_state(Eigen::Index d, double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw QaeError("werner_state: alpha must lie in [-1, 1]");
  const double dd = static_cast<double>(d);
  const Eigen::Index n = d * d;
  Matrix rho = (Matrix::Identity(n, n) - alpha * swap_operator(d)) / (dd * dd - dd * alpha);
  return DensityMatrix(std::move(rho));
}

Hamiltonian werner_log_hamiltonian(Eigen::Index d, double alpha) {
  if (!(alpha > -1.0 && alpha < 1.0)) {
    throw QaeError("werner_log_hamiltonian: alpha must lie strictly inside (-1, 1)");
  }
  const DensityMatrix rho = werner_state(d, alpha);
  return Hamiltonian(hermitian_function(rho.matrix(), [](double p) { return -std::log(p); }));
}

}  // namespace qaelab
