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

#include "qaelab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qaelab {

int qubit_count(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) return -1;
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << " (" << value << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || qubit_count(m_.rows()) < 0) {
    throw DimensionError("density matrix must be square with power-of-two dimension");
  }
  if (const double herm = hermiticity_defect(m_); herm > kHermitianTol) {
    throw InvalidStateError(describe("density matrix is not Hermitian", herm));
  }
  if (const double tr = std::abs(m_.trace() - Complex{1.0}); tr > kTraceTol) {
    throw InvalidStateError(describe("density matrix trace differs from 1", tr));
  }
  clipped_eigenvalues(m_);
}

DensityMatrix DensityMatrix::unchecked(Matrix m) { return DensityMatrix(std::move(m), NoCheck{}); }

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidStateError(describe("state vector is not normalized", norm));
  }
  return DensityMatrix(psi * psi.adjoint(), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d), NoCheck{});
}

DensityMatrix DensityMatrix::basis(int n_qubits, std::uint64_t index) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (static_cast<Eigen::Index>(index) >= d) throw DimensionError("basis index out of range");
  Matrix m = Matrix::Zero(d, d);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(std::move(m), NoCheck{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// ---------------------------------------------------------------------------
// Bipartition / Spectrum

Bipartition::Bipartition(int n_a, int n_b) : n_a_(n_a), n_b_(n_b) {
  if (n_a < 1 || n_b < 1) throw DimensionError("bipartition needs n_A >= 1 and n_B >= 1");
  if (n_a + n_b > 10) throw DimensionError("more than 10 qubits is not supported");
}

Eigen::Index Spectrum::rank(double tol) const {
  return (eigenvalues.array() > tol).count();
}

Matrix Spectrum::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Algebra

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, const Bipartition& part, Subsystem keep) {
  const Eigen::Index da = part.d_a();
  const Eigen::Index db = part.d_b();
  if (rho.rows() != da * db || rho.cols() != da * db) {
    throw DimensionError("partial_trace: state dimension does not match bipartition");
  }
  if (keep == Subsystem::A) {
    Matrix out(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) {
        out(i, j) = rho.block(i * db, j * db, db, db).trace();
      }
    }
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a) out += rho.block(a * db, a * db, db, db);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Bipartition& part, Subsystem keep) {
  return DensityMatrix::unchecked(partial_trace(rho.matrix(), part, keep));
}

Spectrum spectral_decomposition(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("spectral_decomposition: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw QaeError("eigensolver failed to converge");
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return s;
}

RealVector clipped_eigenvalues(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  RealVector ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kPsdTol) {
      throw InvalidStateError(describe("matrix has a negative eigenvalue", ev(i)));
    }
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

Matrix sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  RealVector ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kPsdTol) {
      throw InvalidStateError(describe("matrix has a negative eigenvalue", ev(i)));
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const Matrix& v = solver.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  Spectrum a = spectral_decomposition(rho);
  Spectrum b = spectral_decomposition(sigma);
  for (const Spectrum* s : {&a, &b}) {
    const double low = s->eigenvalues.minCoeff();
    if (low < -kPsdTol) throw InvalidStateError(describe("matrix has a negative eigenvalue", low));
  }
  // F = (tr sqrt(sqrt(r) s sqrt(r)))^2, evaluated on the support of the lower-rank
  // argument. Restricting to the support keeps square roots of rounding noise
  // out of the sum; a pure argument reduces this to <psi|s|psi> exactly.
  constexpr double kSupportTol = 1e-14;
  const DensityMatrix* other = &sigma;
  if (b.rank(kSupportTol) < a.rank(kSupportTol)) {
    std::swap(a, b);
    other = &rho;
  }
  const Eigen::Index k = std::max<Eigen::Index>(a.rank(kSupportTol), 1);
  const Matrix w = a.eigenvectors.leftCols(k) *
                   a.eigenvalues.head(k).cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
  Matrix inner = w.adjoint() * other->matrix() * w;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(inner, Eigen::EigenvaluesOnly);
  double root_trace = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    root_trace += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
  }
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

double fidelity(const Vector& psi, const DensityMatrix& sigma) {
  if (psi.size() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::clamp(psi.dot(sigma.matrix() * psi).real(), 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector p = clipped_eigenvalues(rho.matrix());
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s -= p(i) * std::log2(p(i));
  }
  return std::max(s, 0.0);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double unitarity_defect(const Matrix& u) {
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw DimensionError("apply_unitary: dimension mismatch");
  }
  if (const double defect = unitarity_defect(u); defect > kUnitaryTol) {
    throw QaeError(describe("apply_unitary: operator is not unitary", defect));
  }
  return DensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
}

double expectation(const DensityMatrix& rho, const Matrix& obs) {
  if (obs.rows() != rho.dim() || obs.cols() != rho.dim()) {
    throw DimensionError("expectation: dimension mismatch");
  }
  // tr(rho obs) = sum_ij rho_ij obs_ji
  return rho.matrix().cwiseProduct(obs.transpose()).sum().real();
}

// ---------------------------------------------------------------------------
// Paulis

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix embed_single(const Matrix& op, int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw DimensionError("embed_single: qubit out of range");
  const Matrix left = Matrix::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit);
  const Eigen::Index right_dim = Eigen::Index{1} << (n_qubits - qubit - 1);
  const Matrix right = Matrix::Identity(right_dim, right_dim);
  return kron(kron(left, op), right);
}

// ---------------------------------------------------------------------------
// Random sampling

Matrix random_unitary(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so Q is Haar distributed.
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

Vector random_pure_state(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

DensityMatrix random_density_matrix(Eigen::Index d, Eigen::Index rank, Rng& rng) {
  if (rank < 1 || rank > d) throw DimensionError("random_density_matrix: rank out of range");
  std::exponential_distribution<double> expo(1.0);
  RealVector p = RealVector::Zero(d);
  for (Eigen::Index i = 0; i < rank; ++i) p(i) = expo(rng);
  p /= p.sum();
  const Matrix u = random_unitary(d, rng);
  Matrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::unchecked(std::move(rho));
}

}  // namespace qaelab
