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
#include <map>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qaelab/models.hpp"

namespace qaelab {
namespace {

using testing::max_abs;

TEST(Tfim, TwoSiteGroundEnergy) {
  const RealVector ev = spectral_decomposition(tfim_hamiltonian(2, 1.0, 1.0).matrix()).eigenvalues;
  EXPECT_NEAR(ev(ev.size() - 1), -std::sqrt(5.0), 1e-12);
  const std::vector<double> ref = testing::jacobi_eigenvalues(tfim_hamiltonian(2, 1.0, 1.0).matrix());
  EXPECT_NEAR(ref.back(), -std::sqrt(5.0), 1e-12);
}

TEST(Tfim, ClassicalLimit) {
  const RealVector ev = spectral_decomposition(tfim_hamiltonian(2, 1.0, 0.0).matrix()).eigenvalues;
  EXPECT_NEAR(ev(0), 1.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.0, 1e-12);
  EXPECT_NEAR(ev(2), -1.0, 1e-12);
  EXPECT_NEAR(ev(3), -1.0, 1e-12);
}

TEST(Tfim, OpenChainFiveSites) {
  const Matrix h = tfim_hamiltonian(5, 1.0, 1.0).matrix();
  EXPECT_LE(hermiticity_defect(h), 1e-15);
  EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-12);
  // Open chain: the all-zero string sees 4 bonds.
  EXPECT_NEAR(h(0, 0).real(), -4.0, 1e-15);
  EXPECT_THROW(tfim_hamiltonian(1, 1.0, 1.0), QaeError);
}

TEST(Hamiltonian, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(Hamiltonian{m}, QaeError);
}

TEST(Thermal, InfiniteTemperature) {
  const DensityMatrix rho = thermal_state(tfim_hamiltonian(3, 1.0, 1.0), 0.0);
  EXPECT_LE(max_abs(rho.matrix() - Matrix::Identity(8, 8) / 8.0), 1e-14);
}

TEST(Thermal, LowTemperatureApproachesGroundState) {
  const Hamiltonian h = tfim_hamiltonian(2, 1.0, 1.0);
  const Spectrum neg = spectral_decomposition(Matrix(-h.matrix()));
  const Vector ground = neg.eigenvectors.col(0);
  EXPECT_GE(fidelity(ground, thermal_state(h, 50.0)), 0.999);
}

TEST(Thermal, CommutesWithHamiltonian) {
  for (double beta : {0.3, 1.0, 2.5}) {
    const Hamiltonian h = tfim_hamiltonian(4, 1.0, 0.7);
    const Matrix rho = thermal_state(h, beta).matrix();
    EXPECT_LE(max_abs(rho * h.matrix() - h.matrix() * rho), 1e-9);
  }
  EXPECT_THROW(thermal_state(tfim_hamiltonian(2, 1.0, 1.0), -1.0), QaeError);
}

TEST(Thermal, EntropyNonIncreasingInBeta) {
  const Hamiltonian h = tfim_hamiltonian(5, 1.0, 1.0);
  double prev = 1e9;
  for (int i = 0; i <= 12; ++i) {
    const double s = von_neumann_entropy(thermal_state(h, 0.25 * i));
    EXPECT_LE(s, prev + 1e-12);
    prev = s;
  }
}

TEST(CostHamiltonian, ThreeTrashQubitsDiagonal) {
  // 1 - sum_j r_j (1 - 2 b_j) with r = (1, 1/2, 1/4), per bit string.
  std::vector<double> expected;
  for (int b = 0; b < 8; ++b) {
    double v = 1.0;
    const double r[] = {1.0, 0.5, 0.25};
    for (int j = 0; j < 3; ++j) v -= r[j] * (1 - 2 * ((b >> (2 - j)) & 1));
    expected.push_back(v);
  }
  const std::vector<double> listed = {-0.75, -0.25, 0.25, 0.75, 1.25, 1.75, 2.25, 2.75};
  EXPECT_EQ(expected, listed);
  const Matrix h = cost_hamiltonian(3).matrix();
  EXPECT_LE(max_abs(h - Matrix(h.diagonal().asDiagonal())), 0);
  for (int b = 0; b < 8; ++b) EXPECT_NEAR(h(b, b).real(), listed[static_cast<std::size_t>(b)], 1e-15);
}

TEST(CostHamiltonian, SingleQubit) {
  const Matrix h = cost_hamiltonian(1).matrix();
  EXPECT_NEAR(h(0, 0).real(), 0.0, 0);
  EXPECT_NEAR(h(1, 1).real(), 2.0, 0);
}

TEST(CostHamiltonian, StrictlyIncreasing) {
  for (int n_b = 1; n_b <= 5; ++n_b) {
    const Matrix h = cost_hamiltonian(n_b).matrix();
    double min_gap = 1e9;
    for (Eigen::Index b = 1; b < h.rows(); ++b) min_gap = std::min(min_gap, (h(b, b) - h(b - 1, b - 1)).real());
    EXPECT_GT(min_gap, 0.0);
    if (n_b == 3) EXPECT_NEAR(min_gap, 0.5, 1e-15);
  }
  EXPECT_THROW(cost_hamiltonian(2, RealVector::Ones(3)), DimensionError);
}

TEST(LatentHamiltonian, DegeneracyEqualsLatentDimension) {
  const Matrix h = latent_hamiltonian(2, 3).matrix();
  std::map<long, int> histogram;
  for (Eigen::Index i = 0; i < h.rows(); ++i) ++histogram[std::lround(h(i, i).real() * 1000)];
  EXPECT_EQ(histogram.size(), 8u);
  for (const auto& [value, count] : histogram) EXPECT_EQ(count, 4);
  EXPECT_LE(max_abs(h - kron(Matrix::Identity(4, 4), cost_hamiltonian(3).matrix())), 0);
  // Ground space: b = 000 for every a.
  const double ground = h.diagonal().real().minCoeff();
  for (Eigen::Index a = 0; a < 4; ++a) EXPECT_EQ(h(a * 8, a * 8).real(), ground);
}

TEST(LatentHamiltonian, IsingVariantHasDegenerateProductEigenstates) {
  const Matrix h = latent_hamiltonian(1, 3, LatentKind::Ising).matrix();
  EXPECT_LE(max_abs(h - Matrix(h.diagonal().asDiagonal())), 0);
  EXPECT_NEAR(h(0, 0).real(), -5.0, 1e-15);
  EXPECT_NEAR(h(8, 8).real(), -5.0, 1e-15);
}

TEST(Swap, Properties) {
  const Matrix f2 = swap_operator(2);
  EXPECT_NEAR(std::abs(f2(2, 1)), 1.0, 0);
  for (Eigen::Index d : {2, 3, 8}) {
    const Matrix f = swap_operator(d);
    EXPECT_LE(max_abs(f * f - Matrix::Identity(d * d, d * d)), 1e-12);
    EXPECT_LE(hermiticity_defect(f), 0);
    EXPECT_NEAR(f.trace().real(), static_cast<double>(d), 0);
  }
}

TEST(Werner, Examples) {
  EXPECT_LE(max_abs(werner_state(8, 0.0).matrix() - Matrix::Identity(64, 64) / 64.0), 1e-15);
  const RealVector ev = spectral_decomposition(werner_state(8, 1.0)).eigenvalues;
  for (Eigen::Index i = 0; i < 28; ++i) EXPECT_NEAR(ev(i), 1.0 / 28.0, 1e-12);
  for (Eigen::Index i = 28; i < 64; ++i) EXPECT_NEAR(ev(i), 0.0, 1e-12);
  EXPECT_THROW(werner_state(8, 1.5), QaeError);
}

TEST(Werner, UnitaryTwirlInvariance) {
  Rng rng(1);
  const DensityMatrix w = werner_state(8, 0.5);
  for (int i = 0; i < 10; ++i) {
    const Matrix u = random_unitary(8, rng);
    const DensityMatrix rotated = apply_unitary(w, kron(u, u));
    EXPECT_GE(fidelity(w, rotated), 1.0 - 1e-9);
  }
}

TEST(Werner, PartialTransposeChangesSignAtSeparabilityBoundary) {
  EXPECT_GE(testing::ppt_min_eigenvalue(werner_state(8, 0.125 - 0.01).matrix(), 8), 0.0);
  EXPECT_LT(testing::ppt_min_eigenvalue(werner_state(8, 0.125 + 0.01).matrix(), 8), 0.0);
}

TEST(WernerLogHamiltonian, Examples) {
  const Matrix h0 = werner_log_hamiltonian(8, 0.0).matrix();
  EXPECT_LE(max_abs(h0 - std::log(64.0) * Matrix::Identity(64, 64)), 1e-12);
  for (double alpha : {-0.9, 0.0, 0.9}) {
    const Hamiltonian h = werner_log_hamiltonian(8, alpha);
    EXPECT_LE(max_abs(thermal_state(h, 1.0).matrix() - werner_state(8, alpha).matrix()), 1e-9);
    const Matrix f = swap_operator(8);
    EXPECT_LE(max_abs(h.matrix() * f - f * h.matrix()), 1e-10);
  }
  EXPECT_THROW(werner_log_hamiltonian(8, 1.0), QaeError);
  EXPECT_THROW(werner_log_hamiltonian(8, -1.0), QaeError);
}

}  // namespace
}  // namespace qaelab
