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

#include "qaelab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "qaelab/adiabatic.hpp"
#include "qaelab/autoencoder.hpp"
#include "qaelab/experiment.hpp"
#include "qaelab/log.hpp"
#include "qaelab/pqae.hpp"

namespace qaelab::acceptance {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "FAILED(" << what << ") ";
    }
  }
};

std::string num(double x, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. Projected worked example

void worked_example(Outcome& out, std::ostream&, int) {
  PureEnsemble ens;
  Vector psi = Vector::Zero(4);
  psi(0) = std::sqrt(2.0 / 3.0);
  psi(3) = std::sqrt(1.0 / 3.0);
  ens.states.push_back(psi);
  const Bipartition part(1, 1);
  const ParamCircuit c = build_ansatz(2, 0);
  TrainReport identity;
  identity.final_theta = RealVector::Zero(c.param_count);
  const PqaeReport r = pqae_reconstruct(ens, part, c, identity);
  const double plain_err = std::abs(r.mean_plain_fidelity - 4.0 / 9.0);
  const double proj_err = std::abs(r.mean_fidelity - 2.0 / 3.0);
  out.detail << "plain " << num(r.mean_plain_fidelity, 12) << " (4/9), projected "
             << num(r.mean_fidelity, 12) << " (2/3)";
  out.require(plain_err <= 1e-9, "plain fidelity off by " + num(plain_err));
  out.require(proj_err <= 1e-9, "projected fidelity off by " + num(proj_err));
}

// ---------------------------------------------------------------------------
// 2. Fidelity bound for the standard model

TrainConfig small_training(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.depth_p = 4;
  cfg.max_iters = 600;
  cfg.early_stop = true;
  cfg.lr_decay = false;
  cfg.seed = seed;
  return cfg;
}

void fidelity_bound(Outcome& out, std::ostream& log, int) {
  Rng rng(20260101);
  double worst_margin = -1.0;
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_density_matrix(8, 8, rng);
    for (int n_a : {1, 2}) {
      const Bipartition part(n_a, 3 - n_a);
      const PipelineResult r = run_pipeline(rho, part, QaeVariant::Standard,
                                            small_training(static_cast<std::uint64_t>(100 * i + n_a)));
      const double bound = qae_fidelity_bound(rho, part);
      worst_margin = std::max(worst_margin, r.fidelity - bound);
      ++checked;
      if (r.fidelity > bound + 0.01) {
        out.require(false, "state " + std::to_string(i) + " n_A=" + std::to_string(n_a) + " F " +
                               num(r.fidelity) + " > bound " + num(bound) + " + 0.01");
      }
    }
  }
  log << "  bound: " << checked << " trained runs, max(F - bound) = " << num(worst_margin) << "\n";

  // Flat spectrum {1/4 x 4} on three qubits compressed to one qubit.
  const Matrix basis = random_unitary(8, rng);
  Matrix flat = Matrix::Zero(8, 8);
  for (int k = 0; k < 4; ++k) flat += 0.25 * basis.col(k) * basis.col(k).adjoint();
  const DensityMatrix rho_flat(flat);
  TrainConfig cfg = small_training(7);
  cfg.restarts = 3;
  const PipelineResult r = run_pipeline(rho_flat, Bipartition(1, 2), QaeVariant::Standard, cfg);
  out.detail << checked << " runs, max(F - bound) " << num(worst_margin) << "; flat rank-4 F "
             << num(r.fidelity);
  out.require(r.fidelity <= 0.51, "flat-spectrum fidelity " + num(r.fidelity) + " > 0.51");
}

// ---------------------------------------------------------------------------
// 3. Exact compression of low-rank inputs

void low_rank(Outcome& out, std::ostream& log, int) {
  Rng rng(20260202);
  double worst = 1.0;
  for (int i = 0; i < 10; ++i) {
    const int n_a = i % 2 == 0 ? 2 : 1;
    const Bipartition part(n_a, 3 - n_a);
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(i / 2) % part.d_a();
    const DensityMatrix rho = random_density_matrix(8, rank, rng);
    TrainConfig cfg;
    cfg.depth_p = 6;
    cfg.max_iters = 1500;
    cfg.early_stop = false;
    cfg.lr_decay = true;
    cfg.restarts = 2;
    cfg.seed = static_cast<std::uint64_t>(300 + i);
    const PipelineResult r = run_pipeline(rho, part, QaeVariant::Standard, cfg);
    log << "  low rank: instance " << i << " n_A=" << n_a << " rank " << rank << " F "
        << num(r.fidelity, 8) << "\n";
    worst = std::min(worst, r.fidelity);
    if (r.fidelity < 0.999) {
      out.require(false, "instance " + std::to_string(i) + " F " + num(r.fidelity, 8));
    }
  }
  out.detail << "10 instances, min F " << num(worst, 8);
}

// ---------------------------------------------------------------------------
// 4. TFIM thermal-state sweep, gate-based models

ExperimentConfig tfim_beta_config() {
  ExperimentConfig cfg;
  cfg.name = "tfim-beta";
  cfg.models = {ModelKind::Qae, ModelKind::Nqae};
  cfg.system = SystemKind::Tfim;
  cfg.n_a = 2;
  cfg.n_b = 3;
  cfg.sweep = SweepParameter::Beta;
  for (int i = 1; i <= 12; ++i) cfg.grid.push_back(0.25 * i);
  cfg.seed = 11;
  cfg.training.depth_p = 24;
  cfg.training.max_iters = 3000;
  cfg.training.early_stop = false;
  cfg.training.lr_decay = true;
  cfg.training.restarts = 2;
  return cfg;
}

void tfim_sweep(Outcome& out, std::ostream& log, int workers) {
  const ExperimentConfig cfg = tfim_beta_config();
  const auto qae = run_model(cfg, ModelKind::Qae, workers);
  const auto nqae = run_model(cfg, ModelKind::Nqae, workers);
  double min_f = 1.0;
  double max_ds = 0.0;
  for (std::size_t i = 0; i < qae.size(); ++i) {
    const ResultRow& q = qae[i];
    const ResultRow& n = nqae[i];
    const double ds_n = std::abs(n.output_entropy - n.input_entropy);
    const double ds_q = std::abs(q.output_entropy - q.input_entropy);
    log << "  tfim beta " << num(n.sweep_value, 3) << ": F_qae " << num(q.fidelity) << " F_nqae "
        << num(n.fidelity) << " |dS|_nqae " << num(ds_n, 4) << " |dS|_qae " << num(ds_q, 4) << "\n";
    min_f = std::min(min_f, n.fidelity);
    max_ds = std::max(max_ds, ds_n);
    const std::string at = "beta " + num(n.sweep_value, 3);
    out.require(n.fidelity >= 0.95, "(a) " + at + " F_nqae " + num(n.fidelity));
    out.require(n.fidelity > q.fidelity,
                "(b) " + at + " F_nqae " + num(n.fidelity) + " <= F_qae " + num(q.fidelity));
    out.require(ds_n <= 0.15, "(c) " + at + " |dS| " + num(ds_n, 4));
    if (n.sweep_value <= 1.0) {
      out.require(ds_q > std::max(0.15, ds_n), "(c) " + at + " qae |dS| " + num(ds_q, 4));
    }
  }
  out.detail << "min F_nqae " << num(min_f) << ", max |dS|_nqae " << num(max_ds, 4);
}

// ---------------------------------------------------------------------------
// 5. Annealing models

void anneal_ordering(Outcome& out, std::ostream& log, int workers) {
  ExperimentConfig cfg;
  cfg.models = {ModelKind::Aqae, ModelKind::Naqae};
  cfg.system = SystemKind::Tfim;
  cfg.n_a = 2;
  cfg.n_b = 3;
  cfg.sweep = SweepParameter::AnnealTime;
  cfg.grid = {10.0, 50.0, 100.0, 500.0, 1000.0};
  cfg.params.beta = 1.0;
  const auto plain = run_model(cfg, ModelKind::Aqae, workers);
  const auto noisy = run_model(cfg, ModelKind::Naqae, workers);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    log << "  anneal t_a " << num(plain[i].sweep_value) << ": F_aqae " << num(plain[i].fidelity)
        << " F_naqae " << num(noisy[i].fidelity) << "\n";
  }
  const double fa = plain.back().fidelity;
  const double fn = noisy.back().fidelity;
  out.detail << "t_a=1000: F_naqae " << num(fn) << " vs F_aqae " << num(fa);
  out.require(fn > fa, "naqae not above aqae at t_a = 1000");
  for (const auto* rows : {&plain, &noisy}) {
    for (std::size_t i = 1; i < rows->size(); ++i) {
      const double drop = (*rows)[i - 1].fidelity - (*rows)[i].fidelity;
      if (drop > 0.02) {
        out.require(false, "fidelity drops by " + num(drop) + " at t_a " +
                               num((*rows)[i].sweep_value));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 6. Werner states

void werner(Outcome& out, std::ostream& log, int workers) {
  ExperimentConfig cfg;
  cfg.models = {ModelKind::Nqae};
  cfg.system = SystemKind::Werner;
  cfg.n_a = 5;
  cfg.n_b = 1;
  cfg.sweep = SweepParameter::Alpha;
  cfg.grid = {-0.95, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 0.95};
  cfg.seed = 13;
  cfg.training.depth_p = 10;
  cfg.training.max_iters = 800;
  cfg.training.early_stop = false;
  cfg.training.lr_decay = true;
  cfg.training.restarts = 12;
  const auto rows = run_model(cfg, ModelKind::Nqae, workers);
  double max_ds = 0.0;
  double f_edge = 1.0;
  for (const ResultRow& r : rows) {
    const double ds = std::abs(r.output_entropy - r.input_entropy);
    log << "  werner alpha " << num(r.sweep_value, 3) << ": F " << num(r.fidelity) << " S_in "
        << num(r.input_entropy, 5) << " S_out " << num(r.output_entropy, 5) << "\n";
    if (r.sweep_value >= -0.5 - 1e-12) {
      max_ds = std::max(max_ds, ds);
      out.require(ds <= 0.2, "alpha " + num(r.sweep_value, 3) + " |dS| " + num(ds, 4));
    }
    if (std::abs(r.sweep_value + 0.95) < 1e-12) f_edge = r.fidelity;
  }
  out.detail << "max |dS| on [-0.5, 0.95] " << num(max_ds, 4) << ", F(alpha=-0.95) " << num(f_edge);
  out.require(f_edge < 0.95, "fidelity at alpha = -0.95 reaches 0.95");
}

// ---------------------------------------------------------------------------
// 7. Projected vs standard autoencoder on Haar ensembles

void pqae_ordering(Outcome& out, std::ostream& log, int workers) {
  ExperimentConfig cfg;
  cfg.models = {ModelKind::Pqae, ModelKind::Qae};
  cfg.system = SystemKind::Random;
  cfg.n_a = 2;
  cfg.n_b = 3;
  cfg.sweep = SweepParameter::EnsembleSize;
  cfg.grid = {2.0, 4.0, 8.0, 16.0};
  cfg.training.depth_p = 4;
  cfg.training.max_iters = 1000;
  cfg.training.early_stop = false;
  cfg.training.lr_decay = true;
  double worst_gap = 1.0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    cfg.seed = seed;
    const auto p = run_model(cfg, ModelKind::Pqae, workers);
    const auto q = run_model(cfg, ModelKind::Qae, workers);
    for (std::size_t i = 0; i < p.size(); ++i) {
      log << "  ensemble seed " << seed << " N " << num(p[i].sweep_value) << ": F_pqae "
          << num(p[i].fidelity) << " F_qae " << num(q[i].fidelity) << "\n";
      worst_gap = std::min(worst_gap, p[i].fidelity - q[i].fidelity);
      if (p[i].fidelity < q[i].fidelity) {
        out.require(false, "seed " + std::to_string(seed) + " N " + num(p[i].sweep_value));
      }
    }
  }
  out.detail << "min(F_pqae - F_qae) over N x seeds " << num(worst_gap);
}

// ---------------------------------------------------------------------------
// 8. Numerical properties

void properties(Outcome& out, std::ostream& log, int) {
  Rng rng(20260808);
  int checks = 0;
  const auto check = [&](bool ok, const std::string& what) {
    ++checks;
    out.require(ok, what);
  };

  // Unitarity.
  const ParamCircuit c4 = build_ansatz(4, 3);
  const Matrix u = circuit_unitary(c4, random_angles(c4.param_count, rng));
  check(unitarity_defect(u) <= 1e-9, "circuit unitarity");
  check(unitarity_defect(random_unitary(16, rng)) <= 1e-9, "Haar unitarity");
  const AnnealSchedule sched(tfim_hamiltonian(3, 1.0, 1.0), latent_hamiltonian(1, 2), 5.0, 0.1);
  double worst_step = 0.0;
  for (int k = 0; k < sched.steps(); ++k) {
    worst_step = std::max(worst_step, unitarity_defect(step_propagator(sched, k)));
  }
  check(worst_step <= 1e-10, "anneal step unitarity " + num(worst_step));

  // Spectrum preservation under evolve.
  const DensityMatrix rho3 = random_density_matrix(8, 8, rng);
  const DensityMatrix evolved = evolve(rho3, sched);
  const RealVector before = spectral_decomposition(rho3).eigenvalues;
  const RealVector after = spectral_decomposition(evolved).eigenvalues;
  check((before - after).cwiseAbs().maxCoeff() <= 1e-8, "spectrum preservation");

  // Gradients: parameter shift against central differences, all loss shapes.
  const Bipartition part(1, 2);
  const ParamCircuit c3 = build_ansatz(3, 2);
  const RealVector theta = random_angles(c3.param_count, rng);
  PureEnsemble ens = PureEnsemble::haar(3, 3, rng);
  Matrix zero1 = Matrix::Zero(2, 2);
  zero1(0, 0) = 1.0;
  const ParamCircuit w = build_ansatz(1, 2);
  const std::vector<std::pair<std::string, CircuitObjective>> objectives = {
      {"trash", trash_objective(rho3, part, c3)},
      {"diag", diag_objective(rho3, part, c3, cost_hamiltonian(2))},
      {"projected", pqae_objective(ens, part, c3)},
      {"projection", CircuitObjective(w, {random_density_matrix(2, 2, rng).matrix()}, {1.0}, {zero1},
                                      Combiner::linear(1.0, -1.0))}};
  for (const auto& [name, obj] : objectives) {
    const RealVector th = obj.circuit().n_qubits == 3 ? theta : random_angles(obj.circuit().param_count, rng);
    const RealVector ps = obj.gradient(th, GradientScheme::ParameterShift);
    const RealVector fd = obj.gradient(th, GradientScheme::CentralDifference);
    const RealVector adj = obj.gradient(th, GradientScheme::Adjoint);
    check((ps - fd).cwiseAbs().maxCoeff() <= 1e-4, name + " shift vs difference");
    check((ps - adj).cwiseAbs().maxCoeff() <= 1e-9, name + " shift vs adjoint");
  }

  // Thermal limits.
  const Hamiltonian h4 = tfim_hamiltonian(4, 1.0, 1.0);
  const Matrix id = Matrix::Identity(16, 16) / 16.0;
  check((thermal_state(h4, 0.0).matrix() - id).cwiseAbs().maxCoeff() <= 1e-12, "beta = 0");
  const Spectrum hs = spectral_decomposition(DensityMatrix::unchecked(h4.matrix()));
  const Vector ground = hs.eigenvectors.col(hs.eigenvectors.cols() - 1);
  check(fidelity(ground, thermal_state(h4, 200.0)) >= 1.0 - 1e-9, "beta -> infinity");

  // Damping identity.
  double worst_damp = 0.0;
  for (double eps : {0.0, 0.05, 0.2, 0.37, 0.5}) {
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0 - eps;
    sigma(1, 1) = eps;
    worst_damp = std::max(worst_damp, (prepare_noise_qubit(eps).matrix() - sigma).cwiseAbs().maxCoeff());
  }
  check(worst_damp <= 1e-15, "X N(|1><1|) X = sigma, deviation " + num(worst_damp));

  // Fidelity and entropy axioms.
  const DensityMatrix a = random_density_matrix(8, 3, rng);
  const DensityMatrix b = random_density_matrix(8, 8, rng);
  const Matrix v = random_unitary(8, rng);
  check(std::abs(fidelity(a, a) - 1.0) <= 1e-8, "F(rho, rho) = 1");
  check(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-8, "fidelity symmetry");
  const double fab = fidelity(a, b);
  check(fab >= 0.0 && fab <= 1.0, "fidelity range");
  check(std::abs(fidelity(apply_unitary(a, v), apply_unitary(b, v)) - fab) <= 1e-8,
        "fidelity unitary invariance");
  const Vector psi = random_pure_state(8, rng);
  check(std::abs(fidelity(psi, b) - expectation(b, psi * psi.adjoint())) <= 1e-10,
        "pure-state fidelity");
  check(std::abs(von_neumann_entropy(DensityMatrix::maximally_mixed(3)) - 3.0) <= 1e-10,
        "S(I/8) = 3");
  check(std::abs(von_neumann_entropy(DensityMatrix::pure(psi))) <= 1e-10, "S(pure) = 0");
  check(std::abs(von_neumann_entropy(apply_unitary(b, v)) - von_neumann_entropy(b)) <= 1e-10,
        "entropy unitary invariance");
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 0.75;
  q(1, 1) = 0.25;
  check(std::abs(von_neumann_entropy(DensityMatrix(q)) - 0.8112781244591328) <= 1e-12,
        "S(diag(3/4, 1/4))");
  log << "  properties: " << checks << " checks\n";
  out.detail << checks << " checks";
}

struct Criterion {
  const char* name;
  double limit_seconds;
  void (*run)(Outcome&, std::ostream&, int);
};

const Criterion kCriteria[kCriterionCount] = {
    {"projected worked example", 1.0, worked_example},
    {"fidelity bound of the standard model", 600.0, fidelity_bound},
    {"exact compression of low-rank inputs", 300.0, low_rank},
    {"tfim sweep, conservative thresholds", 1800.0, tfim_sweep},
    {"annealing ordering and t_a trend", 1200.0, anneal_ordering},
    {"werner entropy tracking, conservative thresholds", 1800.0, werner},
    {"projected vs standard on Haar ensembles", 1800.0, pqae_ordering},
    {"numerical property suite", 120.0, properties},
};

}  // namespace

std::string criterion_name(int id) {
  if (id < 1 || id > kCriterionCount) return "unknown";
  return kCriteria[id - 1].name;
}

CriterionResult run_criterion(int id, std::ostream& log, int workers) {
  CriterionResult result;
  result.id = id;
  result.name = criterion_name(id);
  if (id < 1 || id > kCriterionCount) {
    result.detail = "no such criterion";
    return result;
  }
  const Criterion& c = kCriteria[id - 1];
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(outcome, log, workers);
  } catch (const std::exception& e) {
    outcome.require(false, std::string("exception: ") + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.seconds > c.limit_seconds) {
    outcome.require(false, "runtime " + num(result.seconds, 4) + " s over " + num(c.limit_seconds) + " s");
  }
  result.passed = outcome.passed;
  result.detail = outcome.detail.str();
  return result;
}

int run_suite(const std::vector<int>& ids, std::ostream& out, int workers) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  }
  int failed = 0;
  for (int id : todo) {
    const CriterionResult r = run_criterion(id, out, workers);
    out << "criterion " << r.id << " " << (r.passed ? "PASS" : "FAIL") << " [" << r.name << "] "
        << r.detail << " (" << std::fixed << std::setprecision(1) << r.seconds << " s)"
        << std::defaultfloat << std::endl;
    if (!r.passed) ++failed;
  }
  return failed;
}

}  // namespace qaelab::acceptance
