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
#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qaelab/autoencoder.hpp"
#include "qaelab/log.hpp"

namespace qaelab {
namespace {

using testing::max_abs;

DensityMatrix diag_state(const std::vector<double>& p) {
  RealVector v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v(static_cast<Eigen::Index>(i)) = p[i];
  return DensityMatrix(v.cast<Complex>().asDiagonal().toDenseMatrix());
}

DensityMatrix product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

// Zero angles give the identity only at depth 0; deeper blocks keep their CNOTs.
RealVector zeros(const ParamCircuit& c) { return RealVector::Zero(c.param_count); }

// Smallest achievable tr[(I_A (x) H_cost) U rho U^dagger]: the sorted spectrum of
// rho paired against the ascending diagonal of I_A (x) H_cost.
double diag_cost_optimum(const DensityMatrix& rho, const Bipartition& part) {
  const RealVector p = spectral_decomposition(rho).eigenvalues;
  std::vector<double> h;
  const Matrix hc = cost_hamiltonian(part.n_b()).matrix();
  for (Eigen::Index a = 0; a < part.d_a(); ++a) {
    for (Eigen::Index b = 0; b < part.d_b(); ++b) h.push_back(hc(b, b).real());
  }
  std::sort(h.begin(), h.end());
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) total += p(static_cast<Eigen::Index>(k)) * h[k];
  return total;
}

class Quiet : public ::testing::Test {
 protected:
  void SetUp() override { set_warnings_enabled(false); }
  void TearDown() override { set_warnings_enabled(true); }
};

TEST(TrashCost, Examples) {
  Rng rng(1);
  const Bipartition part(1, 2);
  const ParamCircuit c = build_ansatz(3, 0);
  const DensityMatrix sigma = random_density_matrix(2, 2, rng);
  EXPECT_NEAR(trash_cost(product(sigma, DensityMatrix::basis(2, 0)), part, c, zeros(c)), 0.0, 1e-14);
  EXPECT_NEAR(trash_cost(product(sigma, DensityMatrix::basis(2, 3)), part, c, zeros(c)), 1.0, 1e-14);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(trash_cost(DensityMatrix::maximally_mixed(3), part, c, random_angles(c.param_count, rng)),
                1.0 - 1.0 / 4.0, 1e-12);
  }
  EXPECT_THROW(trash_cost(DensityMatrix::maximally_mixed(2), part, c, zeros(c)), DimensionError);
}

TEST(DiagCost, Examples) {
  Rng rng(2);
  const Bipartition part(1, 3);
  const ParamCircuit c = build_ansatz(4, 1);
  const ParamCircuit c0 = build_ansatz(4, 0);
  const Hamiltonian h = cost_hamiltonian(3);
  const DensityMatrix sigma = random_density_matrix(2, 2, rng);
  EXPECT_NEAR(diag_cost(product(sigma, DensityMatrix::basis(3, 0)), part, c0, zeros(c0), h), -0.75, 1e-14);
  EXPECT_NEAR(diag_cost(product(sigma, DensityMatrix::maximally_mixed(3)), part, c0, zeros(c0), h), 1.0, 1e-14);
  // The ansatz carries no global phase parameter; U and e^{i phi} U give the
  // same conjugated state, checked through the explicit unitary.
  const RealVector theta = random_angles(c.param_count, rng);
  const DensityMatrix rho = random_density_matrix(16, 4, rng);
  const Matrix u = circuit_unitary(c, theta) * std::polar(1.0, 0.4);
  const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
  const Matrix obs = kron(Matrix::Identity(2, 2), h.matrix());
  EXPECT_NEAR(expectation(rotated, obs), diag_cost(rho, part, c, theta, h), 1e-12);
  EXPECT_THROW(diag_cost(rho, part, c, theta, cost_hamiltonian(2)), DimensionError);
}

TEST(NoiseRates, Examples) {
  for (double eps : noise_rates(DensityMatrix::basis(3, 0)).epsilon) EXPECT_NEAR(eps, 0.0, 1e-15);
  for (double eps : noise_rates(DensityMatrix::maximally_mixed(3)).epsilon) EXPECT_NEAR(eps, 0.5, 1e-15);
  const NoiseSchedule s = noise_rates(diag_state({0.75, 0.25}));
  ASSERT_EQ(s.epsilon.size(), 1u);
  EXPECT_NEAR(s.epsilon[0], 0.25, 1e-15);
  EXPECT_EQ(s.clamped, 0);
}

TEST_F(Quiet, NoiseRatesClampInvertedQubit) {
  const NoiseSchedule s = noise_rates(diag_state({0.1, 0.9}));
  EXPECT_EQ(s.epsilon[0], 0.5);
  EXPECT_EQ(s.clamped, 1);
}

TEST(NoiseInput, Examples) {
  NoiseSchedule s;
  s.epsilon = {0.0, 0.0};
  EXPECT_LE(max_abs(noise_input_state(s).matrix() - DensityMatrix::basis(2, 0).matrix()), 0);
  s.epsilon = {0.5};
  EXPECT_LE(max_abs(noise_input_state(s).matrix() - Matrix::Identity(2, 2) / 2.0), 0);
  s.epsilon = {0.5, 0.0, 0.0};
  const DensityMatrix out = noise_input_state(s);
  EXPECT_LE(max_abs(out.matrix() - kron(Matrix::Identity(2, 2) / 2.0, DensityMatrix::basis(2, 0).matrix())), 0);
  EXPECT_EQ(spectral_decomposition(out).rank(), 2);
}

TEST(NoiseInput, EntropyIsSumOfBinaryEntropies) {
  NoiseSchedule s;
  s.epsilon = {0.1, 0.3, 0.45};
  double expected = 0.0;
  for (double e : s.epsilon) expected += -e * std::log2(e) - (1 - e) * std::log2(1 - e);
  EXPECT_NEAR(von_neumann_entropy(noise_input_state(s)), expected, 1e-12);
}

TEST(NoiseInput, FixedPointOnDiagonalProducts) {
  NoiseSchedule s;
  s.epsilon = {0.05, 0.5, 0.2};
  const DensityMatrix rho_b = noise_input_state(s);
  EXPECT_LE(max_abs(noise_input_state(noise_rates(rho_b)).matrix() - rho_b.matrix()), 1e-15);
}

TEST(AmplitudeDamping, Examples) {
  for (double t : {0.0, 0.3, 5.0}) {
    EXPECT_LE(max_abs(amplitude_damping(DensityMatrix::basis(1, 0), t).matrix() -
                      DensityMatrix::basis(1, 0).matrix()),
              0);
  }
  Rng rng(3);
  const DensityMatrix rho = random_density_matrix(2, 2, rng);
  EXPECT_LE(max_abs(amplitude_damping(rho, 60.0).matrix() - DensityMatrix::basis(1, 0).matrix()), 1e-20);
}

TEST(AmplitudeDamping, PreparesNoiseQubitExactly) {
  for (double eps : {0.0, 0.01, 0.25, 0.4, 0.5}) {
    const Matrix x = pauli_x();
    const Matrix damped =
        amplitude_damping(DensityMatrix::basis(1, 1), damping_time(eps)).matrix();
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0 - eps;
    sigma(1, 1) = eps;
    EXPECT_LE(max_abs(x * damped * x - sigma), 1e-15);
    EXPECT_LE(max_abs(prepare_noise_qubit(eps).matrix() - sigma), 1e-15);
  }
}

TEST(AmplitudeDamping, TraceAndPositivityPreserving) {
  Rng rng(4);
  std::uniform_real_distribution<double> t(0.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix out = amplitude_damping(random_density_matrix(2, 1 + i % 2, rng), t(rng));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(spectral_decomposition(out).eigenvalues.minCoeff(), -1e-12);
  }
  EXPECT_THROW(amplitude_damping(DensityMatrix::basis(2, 0), 1.0), DimensionError);
}

TEST(NoiseInput, PhysicalPreparationMatchesDiagonalForm) {
  NoiseSchedule s;
  s.epsilon = {0.1, 0.35, 0.5};
  EXPECT_LE(max_abs(prepare_noise_input(s).matrix() - noise_input_state(s).matrix()), 1e-15);
}

TEST(Decode, Examples) {
  Rng rng(5);
  const ParamCircuit c = build_ansatz(3, 1);
  const ParamCircuit c0 = build_ansatz(3, 0);
  const DensityMatrix a = random_density_matrix(4, 4, rng);
  const DensityMatrix zero = DensityMatrix::basis(1, 0);
  EXPECT_LE(max_abs(decode(a, zero, c0, zeros(c0)).matrix() - kron(a.matrix(), zero.matrix())), 0);
  const RealVector theta = random_angles(c.param_count, rng);
  EXPECT_LE(spectral_decomposition(decode(a, zero, c, theta)).rank(), 4);
  NoiseSchedule half;
  half.epsilon = {0.5};
  EXPECT_EQ(spectral_decomposition(decode(a, noise_input_state(half), c, theta)).rank(), 8);
  EXPECT_THROW(decode(a, DensityMatrix::basis(2, 0), c, theta), DimensionError);
}

TEST(FidelityBound, Examples) {
  Rng rng(6);
  EXPECT_NEAR(qae_fidelity_bound(random_density_matrix(8, 2, rng), Bipartition(1, 2)), 1.0, 1e-12);
  EXPECT_NEAR(qae_fidelity_bound(random_density_matrix(8, 4, rng), Bipartition(2, 1)), 1.0, 1e-12);
  std::vector<double> flat(8, 0.0);
  std::fill(flat.begin(), flat.begin() + 4, 0.25);
  EXPECT_NEAR(qae_fidelity_bound(diag_state(flat), Bipartition(1, 2)), 0.5, 1e-12);
  EXPECT_NEAR(qae_fidelity_bound(DensityMatrix::maximally_mixed(5), Bipartition(2, 3)), 0.125, 1e-12);
}

TEST_F(Quiet, RankOneInputIsRecoveredByBothVariants) {
  Rng rng(7);
  const Bipartition part(1, 2);
  const ParamCircuit target = build_ansatz(3, 2);
  const Vector psi = circuit_unitary(target, random_angles(target.param_count, rng)).adjoint() *
                     kron(random_pure_state(2, rng), DensityMatrix::basis(2, 0).matrix().col(0));
  const DensityMatrix rho = DensityMatrix::pure(psi);
  TrainConfig cfg;
  cfg.depth_p = 3;
  cfg.seed = 1;
  cfg.restarts = 2;
  cfg.lr_decay = true;
  for (QaeVariant variant : {QaeVariant::Standard, QaeVariant::NoiseAssisted}) {
    const PipelineResult r = run_pipeline(rho, part, variant, cfg);
    EXPECT_GE(r.fidelity, 0.999);
    if (variant == QaeVariant::Standard) EXPECT_LE(r.train.final_loss, 1e-3);
  }
}

TEST_F(Quiet, BoundHoldsOnRandomFullRankStates) {
  Rng rng(8);
  TrainConfig cfg;
  cfg.depth_p = 4;
  cfg.max_iters = 500;
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = random_density_matrix(8, 8, rng);
    for (int n_a : {1, 2}) {
      const Bipartition part(n_a, 3 - n_a);
      cfg.seed = static_cast<std::uint64_t>(i);
      const PipelineResult r = run_pipeline(rho, part, QaeVariant::Standard, cfg);
      EXPECT_LE(r.fidelity, qae_fidelity_bound(rho, part) + 0.01);
    }
  }
}

TEST_F(Quiet, DecouplingAtTheOptimumMakesOutputAProduct) {
  // rho = U0^dagger (sigma_A (x) tau_B) U0 with tau_B diagonal and descending,
  // so the diagonalization optimum is reachable at the training depth.
  Rng rng(9);
  const Bipartition part(1, 2);
  const ParamCircuit c0 = build_ansatz(3, 2);
  const Matrix u0 = circuit_unitary(c0, random_angles(c0.param_count, rng));
  const Matrix inner =
      kron(diag_state({0.7, 0.3}).matrix(), diag_state({0.85, 0.1, 0.04, 0.01}).matrix());
  const DensityMatrix rho(u0.adjoint() * inner * u0);
  TrainConfig cfg;
  cfg.depth_p = 4;
  cfg.max_iters = 2000;
  cfg.lr_decay = true;
  cfg.restarts = 4;
  cfg.seed = 5;
  const TrainReport train = train_encoder(rho, part, QaeVariant::NoiseAssisted, cfg);
  const double optimum = diag_cost_optimum(rho, part);
  ASSERT_LE(train.final_loss - optimum, 1e-3) << "training did not reach the optimum";
  const EncodedState enc = encode(rho, part, build_ansatz(3, train.depth_p), train.final_theta);
  const DensityMatrix joint(enc.joint);
  EXPECT_GE(fidelity(joint, product(enc.latent, enc.trash)), 0.99);
}

// Five-qubit TFIM thermal state at beta = 1, compressed to two qubits. Training
// at depth 24 is the setting used by the shipped sweep configs.
class TfimPipeline : public Quiet {
 protected:
  static void SetUpTestSuite() {
    set_warnings_enabled(false);
    rho_ = new DensityMatrix(thermal_state(tfim_hamiltonian(5, 1.0, 1.0), 1.0));
    TrainConfig cfg;
    cfg.depth_p = 24;
    cfg.max_iters = 3000;
    cfg.early_stop = false;
    cfg.lr_decay = true;
    cfg.restarts = 2;
    cfg.seed = 17;
    qae_ = new PipelineResult(run_pipeline(*rho_, Bipartition(2, 3), QaeVariant::Standard, cfg));
    nqae_ = new PipelineResult(run_pipeline(*rho_, Bipartition(2, 3), QaeVariant::NoiseAssisted, cfg));
  }
  static void TearDownTestSuite() {
    delete rho_;
    delete qae_;
    delete nqae_;
  }
  static DensityMatrix* rho_;
  static PipelineResult* qae_;
  static PipelineResult* nqae_;
};

DensityMatrix* TfimPipeline::rho_ = nullptr;
PipelineResult* TfimPipeline::qae_ = nullptr;
PipelineResult* TfimPipeline::nqae_ = nullptr;

TEST_F(TfimPipeline, TrashCostReachesSpectralTail) {
  const RealVector p = spectral_decomposition(*rho_).eigenvalues;
  EXPECT_NEAR(qae_->train.final_loss, 1.0 - p.head(4).sum(), 0.01);
}

TEST_F(TfimPipeline, DiagonalizationCostReachesOptimalAssignment) {
  EXPECT_NEAR(nqae_->train.final_loss, diag_cost_optimum(*rho_, Bipartition(2, 3)), 0.02);
}

TEST_F(TfimPipeline, StandardFidelityRespectsBound) {
  EXPECT_LE(qae_->fidelity, qae_fidelity_bound(*rho_, Bipartition(2, 3)) + 0.01);
}

TEST_F(TfimPipeline, NoiseAssistedBeatsStandard) {
  EXPECT_GT(nqae_->fidelity, qae_->fidelity);
  EXPECT_GE(nqae_->fidelity, 0.95);
  EXPECT_LT(std::abs(nqae_->output_entropy - nqae_->input_entropy),
            std::abs(qae_->output_entropy - qae_->input_entropy));
  EXPECT_EQ(nqae_->noise.epsilon.size(), 3u);
  for (double eps : qae_->noise.epsilon) EXPECT_EQ(eps, 0.0);
}

TEST_F(Quiet, NoiseAssistedEntropyDeviationNeverExceedsStandardOnTfimGrid) {
  const Bipartition part(2, 3);
  const Hamiltonian h = tfim_hamiltonian(5, 1.0, 1.0);
  TrainConfig cfg;
  cfg.depth_p = 24;
  cfg.max_iters = 1500;
  cfg.early_stop = false;
  cfg.lr_decay = true;
  cfg.seed = 23;
  for (int k = 1; k <= 12; ++k) {
    const double beta = 0.25 * k;
    const DensityMatrix rho = thermal_state(h, beta);
    const PipelineResult q = run_pipeline(rho, part, QaeVariant::Standard, cfg);
    const PipelineResult n = run_pipeline(rho, part, QaeVariant::NoiseAssisted, cfg);
    EXPECT_LE(std::abs(n.output_entropy - n.input_entropy),
              std::abs(q.output_entropy - q.input_entropy))
        << "beta " << beta;
  }
}

}  // namespace
}  // namespace qaelab
