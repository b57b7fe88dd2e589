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
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qaelab/models.hpp"
#include "qaelab/qstate.hpp"

namespace qaelab {
namespace {

using testing::max_abs;

Vector ket(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v(i++) = a;
  return v;
}

DensityMatrix bell() {
  const double s = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(ket({s, 0, 0, s}));
}

DensityMatrix diag_state(std::initializer_list<double> p) {
  RealVector v(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double x : p) v(i++) = x;
  return DensityMatrix(v.cast<Complex>().asDiagonal().toDenseMatrix());
}

TEST(DensityMatrix, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, InvalidStateError);
}

TEST(DensityMatrix, RejectsWrongTrace) {
  EXPECT_THROW(DensityMatrix{Matrix::Identity(2, 2)}, InvalidStateError);
}

TEST(DensityMatrix, RejectsNegativeEigenvalue) {
  EXPECT_THROW(diag_state({1.1, -0.1}), InvalidStateError);
}

TEST(DensityMatrix, RejectsNonPowerOfTwo) {
  EXPECT_THROW(DensityMatrix{Matrix::Identity(3, 3) / 3.0}, QaeError);
}

TEST(DensityMatrix, AcceptsDriftWithinTolerance) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 + 5e-11;
  m(1, 1) = -5e-11;
  EXPECT_NO_THROW(DensityMatrix{m});
}

TEST(Bipartition, RejectsEmptySide) {
  EXPECT_THROW(Bipartition(0, 3), QaeError);
  EXPECT_THROW(Bipartition(2, 0), QaeError);
  const Bipartition p(2, 3);
  EXPECT_EQ(p.d_a(), 4);
  EXPECT_EQ(p.d_b(), 8);
  EXPECT_EQ(p.dim(), 32);
}

TEST(Kron, Examples) {
  EXPECT_LE(max_abs(kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Matrix::Identity(4, 4)), 0);
  const Matrix zz = kron(pauli_z(), pauli_z());
  EXPECT_EQ(zz.diagonal().real(), Eigen::Vector4d(1, -1, -1, 1));
  const Matrix p01 = kron(DensityMatrix::basis(1, 0).matrix(), DensityMatrix::basis(1, 1).matrix());
  EXPECT_LE(max_abs(p01 - DensityMatrix::basis(2, 1).matrix()), 0);
}

TEST(Kron, MixedProduct) {
  Rng rng(1);
  const Matrix a = random_unitary(2, rng), b = random_unitary(4, rng);
  const Matrix c = random_unitary(2, rng), d = random_unitary(4, rng);
  EXPECT_LE(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const DensityMatrix a = partial_trace(bell(), Bipartition(1, 1), Subsystem::A);
  EXPECT_LE(max_abs(a.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummationOnTfimThermalState) {
  const DensityMatrix rho = thermal_state(tfim_hamiltonian(5, 1.0, 1.0), 1.0);
  const Bipartition part(2, 3);
  for (bool keep_a : {true, false}) {
    const Matrix lib = partial_trace(rho, part, keep_a ? Subsystem::A : Subsystem::B).matrix();
    const Matrix ref = testing::brute_force_partial_trace(rho.matrix(), 4, 8, keep_a);
    EXPECT_LE(max_abs(lib - ref), 1e-9);
  }
}

TEST(PartialTrace, ProductStatesAndTrace) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = random_density_matrix(4, 1 + i % 4, rng);
    const DensityMatrix b = random_density_matrix(2, 1 + i % 2, rng);
    const DensityMatrix ab(kron(a.matrix(), b.matrix()));
    const Bipartition part(2, 1);
    EXPECT_LE(max_abs(partial_trace(ab, part, Subsystem::A).matrix() - a.matrix()), 1e-10);
    EXPECT_LE(max_abs(partial_trace(ab, part, Subsystem::B).matrix() - b.matrix()), 1e-10);
    const DensityMatrix mixed = random_density_matrix(8, 8, rng);
    EXPECT_NEAR(partial_trace(mixed, part, Subsystem::A).matrix().trace().real(), 1.0, 1e-10);
    EXPECT_NEAR(partial_trace(mixed, part, Subsystem::B).matrix().trace().real(), 1.0, 1e-10);
  }
}

TEST(PartialTrace, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace(bell(), Bipartition(2, 1), Subsystem::A), DimensionError);
}

TEST(Fidelity, Examples) {
  Rng rng(3);
  const DensityMatrix rho = random_density_matrix(4, 3, rng);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-9);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fidelity(DensityMatrix::basis(1, 0), DensityMatrix::pure(ket({s, s}))), 0.5, 1e-12);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(2), bell()), 0.25, 1e-12);
}

TEST(Fidelity, RangeAndSymmetryOnRandomPairs) {
  Rng rng(4);
  for (Eigen::Index d : {2, 4, 8}) {
    for (int i = 0; i < 100; ++i) {
      std::uniform_int_distribution<Eigen::Index> rank(1, d);
      const DensityMatrix a = random_density_matrix(d, rank(rng), rng);
      const DensityMatrix b = random_density_matrix(d, rank(rng), rng);
      const double fab = fidelity(a, b);
      EXPECT_GE(fab, 0.0);
      EXPECT_LE(fab, 1.0);
      EXPECT_NEAR(fab, fidelity(b, a), 1e-8);
    }
  }
}

TEST(Fidelity, PureStateReducesToExpectation) {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Vector psi = random_pure_state(8, rng);
    const DensityMatrix sigma = random_density_matrix(8, 4, rng);
    const double direct = (psi.adjoint() * sigma.matrix() * psi)(0, 0).real();
    EXPECT_NEAR(fidelity(DensityMatrix::pure(psi), sigma), direct, 1e-9);
    EXPECT_NEAR(fidelity(psi, sigma), direct, 1e-12);
  }
}

TEST(Fidelity, SqrtPsdSquaresBack) {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const Matrix sigma = random_density_matrix(8, 1 + i % 8, rng).matrix();
    const Matrix r = sqrt_psd(sigma);
    EXPECT_LE(max_abs(r * r - sigma), 1e-8);
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::basis(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(5)), 5.0, 1e-10);
  // -3/4 log2(3/4) - 1/4 log2(1/4), evaluated by hand.
  const double expected = -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25);
  EXPECT_NEAR(expected, 0.811278124459, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.75, 0.25})), expected, 1e-12);
}

TEST(Entropy, AdditiveOnProducts) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = random_density_matrix(4, 1 + i % 4, rng);
    const DensityMatrix b = random_density_matrix(2, 2, rng);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(kron(a.matrix(), b.matrix()))),
                von_neumann_entropy(a) + von_neumann_entropy(b), 1e-8);
  }
}

TEST(Entropy, BinaryEntropy) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
}

TEST(Spectrum, Examples) {
  const Spectrum half = spectral_decomposition(DensityMatrix::maximally_mixed(1));
  EXPECT_NEAR(half.eigenvalues(0), 0.5, 1e-15);
  EXPECT_NEAR(half.eigenvalues(1), 0.5, 1e-15);
  const Spectrum s = spectral_decomposition(diag_state({0.1, 0.9}));
  EXPECT_NEAR(s.eigenvalues(0), 0.9, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 0.1, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors(0, 1)), 1.0, 1e-15);
}

TEST(Spectrum, WernerEigenvaluesMatchJacobi) {
  const DensityMatrix w = werner_state(8, 0.5);
  const RealVector lib = spectral_decomposition(w).eigenvalues;
  const std::vector<double> ref = testing::jacobi_eigenvalues(w.matrix());
  ASSERT_EQ(static_cast<std::size_t>(lib.size()), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(lib(static_cast<Eigen::Index>(i)), ref[i], 1e-9);
}

TEST(Spectrum, ComplexHermitianMatchesJacobi) {
  Rng rng(8);
  const DensityMatrix rho = random_density_matrix(8, 8, rng);
  const RealVector lib = spectral_decomposition(rho).eigenvalues;
  const std::vector<double> ref = testing::jacobi_eigenvalues(rho.matrix());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(lib(static_cast<Eigen::Index>(i)), ref[i], 1e-10);
}

TEST(Spectrum, DescendingOrthonormalAndReconstructs) {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density_matrix(16, 1 + i % 16, rng);
    const Spectrum s = spectral_decomposition(rho);
    for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) EXPECT_GE(s.eigenvalues(k - 1), s.eigenvalues(k));
    EXPECT_LE(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(16, 16)), 1e-10);
    EXPECT_LE(max_abs(s.reconstruct() - rho.matrix()), 1e-9);
    EXPECT_EQ(s.rank(), 1 + i % 16);
  }
}

TEST(ApplyUnitary, Examples) {
  Rng rng(10);
  const DensityMatrix rho = random_density_matrix(4, 2, rng);
  EXPECT_LE(max_abs(apply_unitary(rho, Matrix::Identity(4, 4)).matrix() - rho.matrix()), 1e-15);
  EXPECT_LE(max_abs(apply_unitary(DensityMatrix::basis(1, 0), pauli_x()).matrix() -
                    DensityMatrix::basis(1, 1).matrix()),
            0);
  Matrix not_unitary = Matrix::Identity(2, 2);
  not_unitary(0, 0) = 1.1;
  EXPECT_THROW(apply_unitary(DensityMatrix::basis(1, 0), not_unitary), QaeError);
}

TEST(ApplyUnitary, PreservesSpectrumAndEntropy) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = random_density_matrix(8, 1 + i % 8, rng);
    const DensityMatrix out = apply_unitary(rho, random_unitary(8, rng));
    EXPECT_NEAR(von_neumann_entropy(out), von_neumann_entropy(rho), 1e-10);
    EXPECT_LE((spectral_decomposition(out).eigenvalues - spectral_decomposition(rho).eigenvalues)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-9);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(Expectation, Examples) {
  EXPECT_NEAR(expectation(DensityMatrix::basis(1, 0), pauli_z()), 1.0, 1e-15);
  EXPECT_NEAR(expectation(DensityMatrix::maximally_mixed(1), pauli_z()), 0.0, 1e-15);
  EXPECT_NEAR(expectation(DensityMatrix::basis(1, 1), pauli_z()), -1.0, 1e-15);
  EXPECT_THROW(expectation(DensityMatrix::basis(2, 1), pauli_z()), DimensionError);
}

TEST(EmbedSingle, QubitZeroIsMostSignificant) {
  const Matrix z0 = embed_single(pauli_z(), 0, 2);
  EXPECT_NEAR(z0(1, 1).real(), 1.0, 0);
  EXPECT_NEAR(z0(2, 2).real(), -1.0, 0);
}

TEST(RandomStates, ValidAndOfRequestedRank) {
  Rng rng(12);
  for (Eigen::Index k = 1; k <= 8; ++k) {
    const DensityMatrix rho = random_density_matrix(8, k, rng);
    EXPECT_NO_THROW(DensityMatrix{rho.matrix()});
    EXPECT_EQ(spectral_decomposition(rho).rank(), k);
  }
  EXPECT_NEAR(random_pure_state(16, rng).norm(), 1.0, 1e-12);
  EXPECT_LE(unitarity_defect(random_unitary(32, rng)), 1e-12);
}

}  // namespace
}  // namespace qaelab
