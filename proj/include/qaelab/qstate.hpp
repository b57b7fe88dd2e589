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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qaelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

// Tolerances shared by the state algebra.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;

class QaeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public QaeError {
 public:
  using QaeError::QaeError;
};

class InvalidStateError : public QaeError {
 public:
  using QaeError::QaeError;
};

/// Returns log2(dim) when dim is a positive power of two, -1 otherwise.
int qubit_count(Eigen::Index dim);

/// Hermitian, unit-trace, positive semidefinite matrix over n qubits.
///
/// The validating constructor enforces the invariants to 1e-10. Simulation
/// kernels that provably preserve them (unitary conjugation, CPTP maps) use
/// `unchecked` to skip the eigenvalue test.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  static DensityMatrix unchecked(Matrix m);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);
  /// |b><b| for a computational basis index.
  static DensityMatrix basis(int n_qubits, std::uint64_t index);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int n_qubits() const { return qubit_count(m_.rows()); }
  double purity() const;

 private:
  struct NoCheck {};
  DensityMatrix(Matrix m, NoCheck) : m_(std::move(m)) {}
  Matrix m_;
};

enum class Subsystem { A, B };

/// Latent subsystem A on the most significant qubits, trash B on the rest.
class Bipartition {
 public:
  Bipartition(int n_a, int n_b);

  int n_a() const { return n_a_; }
  int n_b() const { return n_b_; }
  int n_qubits() const { return n_a_ + n_b_; }
  Eigen::Index d_a() const { return Eigen::Index{1} << n_a_; }
  Eigen::Index d_b() const { return Eigen::Index{1} << n_b_; }
  Eigen::Index dim() const { return d_a() * d_b(); }

 private:
  int n_a_;
  int n_b_;
};

/// Eigenpairs sorted by descending eigenvalue.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index rank(double tol = 1e-10) const;
  Matrix reconstruct() const;
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Reduced state on `keep`, tracing out the other side of `part`.
DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part, Subsystem keep);
Matrix partial_trace(const Matrix& rho, const Bipartition& part, Subsystem keep);

/// Eigendecomposition of a Hermitian matrix, descending.
Spectrum spectral_decomposition(const Matrix& h);
inline Spectrum spectral_decomposition(const DensityMatrix& rho) {
  return spectral_decomposition(rho.matrix());
}

/// Eigenvalues of a density matrix with the [-1e-10, 0) band clipped to zero.
/// Anything more negative throws InvalidStateError.
RealVector clipped_eigenvalues(const Matrix& rho);

/// Principal square root of a PSD matrix.
Matrix sqrt_psd(const Matrix& m);

/// Uhlmann fidelity (tr sqrt(sqrt(s) r sqrt(s)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Fidelity of a pure state |psi> against sigma: <psi|sigma|psi>.
double fidelity(const Vector& psi, const DensityMatrix& sigma);

/// von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// Binary entropy h2(p) in bits.
double binary_entropy(double p);

/// U rho U^dagger. Throws if u is not unitary to 1e-9.
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u);

/// tr(rho * obs) for a Hermitian observable.
double expectation(const DensityMatrix& rho, const Matrix& obs);

double unitarity_defect(const Matrix& u);
double hermiticity_defect(const Matrix& m);

// Pauli matrices and single-qubit embeddings, qubit 0 most significant.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix embed_single(const Matrix& op, int qubit, int n_qubits);

// Random sampling.
Matrix random_unitary(Eigen::Index d, Rng& rng);
Vector random_pure_state(Eigen::Index d, Rng& rng);
/// Haar eigenbasis with a flat-Dirichlet spectrum on `rank` eigenvectors.
DensityMatrix random_density_matrix(Eigen::Index d, Eigen::Index rank, Rng& rng);

}  // namespace qaelab
