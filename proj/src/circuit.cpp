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

#include "qaelab/circuit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace qaelab {

namespace {

using Gate2 = std::array<Complex, 4>;  // row-major 2x2

Gate2 rotation_matrix(GateKind kind, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  if (kind == GateKind::RY) return {c, -s, s, c};
  return {Complex(c, -s), 0.0, 0.0, Complex(c, s)};
}

Eigen::Index bit_of(int qubit, int n_qubits) { return Eigen::Index{1} << (n_qubits - 1 - qubit); }

void check_qubits(const Matrix& m, int n_qubits) {
  if (m.rows() != (Eigen::Index{1} << n_qubits)) {
    throw DimensionError("gate kernel: matrix rows do not match qubit count");
  }
}

// m <- g m, with g acting on one qubit of the row index.
void left_2x2(Matrix& m, int n_qubits, int qubit, const Gate2& g) {
  const Eigen::Index stride = bit_of(qubit, n_qubits);
  const Eigen::Index dim = m.rows();
  const bool diagonal = g[1] == Complex{} && g[2] == Complex{};
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Complex* data = m.col(col).data();
    for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
      if (diagonal) {
        for (Eigen::Index i = base; i < base + stride; ++i) {
          data[i] *= g[0];
          data[i + stride] *= g[3];
        }
        continue;
      }
      for (Eigen::Index i = base; i < base + stride; ++i) {
        const Complex a = data[i];
        const Complex b = data[i + stride];
        data[i] = g[0] * a + g[1] * b;
        data[i + stride] = g[2] * a + g[3] * b;
      }
    }
  }
}

// m <- m g^dagger, with g acting on one qubit of the column index.
void right_adjoint_2x2(Matrix& m, int n_qubits, int qubit, const Gate2& g) {
  const Eigen::Index stride = bit_of(qubit, n_qubits);
  const Eigen::Index dim = m.cols();
  const Complex c00 = std::conj(g[0]), c01 = std::conj(g[1]);
  const Complex c10 = std::conj(g[2]), c11 = std::conj(g[3]);
  const bool diagonal = g[1] == Complex{} && g[2] == Complex{};
  const Eigen::Index rows = m.rows();
  for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
    for (Eigen::Index i = base; i < base + stride; ++i) {
      Complex* ci = m.col(i).data();
      Complex* cj = m.col(i + stride).data();
      if (diagonal) {
        for (Eigen::Index r = 0; r < rows; ++r) {
          ci[r] *= c00;
          cj[r] *= c11;
        }
        continue;
      }
      for (Eigen::Index r = 0; r < rows; ++r) {
        const Complex a = ci[r];
        const Complex b = cj[r];
        ci[r] = c00 * a + c01 * b;
        cj[r] = c10 * a + c11 * b;
      }
    }
  }
}

void cnot_rows(Matrix& m, int n_qubits, int control, int target) {
  const Eigen::Index cbit = bit_of(control, n_qubits);
  const Eigen::Index tbit = bit_of(target, n_qubits);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Complex* data = m.col(col).data();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if ((i & cbit) && !(i & tbit)) std::swap(data[i], data[i | tbit]);
    }
  }
}

void cnot_cols(Matrix& m, int n_qubits, int control, int target) {
  const Eigen::Index cbit = bit_of(control, n_qubits);
  const Eigen::Index tbit = bit_of(target, n_qubits);
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    if ((i & cbit) && !(i & tbit)) m.col(i).swap(m.col(i | tbit));
  }
}

// tr(O P rho) for Hermitian rho and a Pauli generator P (Y or Z) on one qubit,
// reading rho(j, i) as conj(rho(i, j)) so every access runs down a column.
Complex trace_obs_pauli_state(const Matrix& obs, const Matrix& rho, int n_qubits, int qubit,
                              GateKind kind) {
  const Eigen::Index bit = bit_of(qubit, n_qubits);
  const Eigen::Index dim = rho.rows();
  Complex total{};
  for (Eigen::Index j = 0; j < dim; ++j) {
    const bool set = (j & bit) != 0;
    Complex factor;
    Eigen::Index src = j;
    if (kind == GateKind::RZ) {
      factor = set ? -1.0 : 1.0;
    } else {
      factor = set ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
      src = j ^ bit;
    }
    const Complex* o = obs.col(j).data();
    const Complex* r = rho.col(src).data();
    Complex acc{};
    for (Eigen::Index i = 0; i < dim; ++i) acc += o[i] * std::conj(r[i]);
    total += factor * acc;
  }
  return total;
}

// <lambda| P_qubit |psi> for P = Z (RZ) or Y (RY).
Complex overlap_pauli(const Matrix& lambda, const Matrix& psi, int n_qubits, int qubit,
                      GateKind kind) {
  const Eigen::Index bit = bit_of(qubit, n_qubits);
  Complex total{};
  for (Eigen::Index j = 0; j < psi.rows(); ++j) {
    const bool set = (j & bit) != 0;
    if (kind == GateKind::RZ) {
      total += (set ? -1.0 : 1.0) * std::conj(lambda(j, 0)) * psi(j, 0);
    } else {
      const Complex factor = set ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
      total += factor * std::conj(lambda(j, 0)) * psi(j ^ bit, 0);
    }
  }
  return total;
}

// tr(a b) without forming the product.
Complex trace_of_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace

// ---------------------------------------------------------------------------
// Ansatz

ParamCircuit build_ansatz(int n_qubits, int depth_p) {
  if (n_qubits < 1) throw DimensionError("build_ansatz: n_qubits must be >= 1");
  if (depth_p < 0) throw DimensionError("build_ansatz: depth_p must be >= 0");
  ParamCircuit c;
  c.n_qubits = n_qubits;
  c.depth_p = depth_p;
  int next = 0;
  auto rotation = [&](GateKind kind, int q) { c.gates.push_back({kind, q, -1, next++}); };

  for (int q = 0; q < n_qubits; ++q) rotation(GateKind::RY, q);
  for (int q = 0; q < n_qubits; ++q) rotation(GateKind::RZ, q);
  for (int block = 0; block < depth_p; ++block) {
    for (int q = 0; q + 1 < n_qubits; ++q) c.gates.push_back({GateKind::CNOT, q, q + 1, -1});
    for (int q = 0; q < n_qubits; ++q) {
      rotation(GateKind::RZ, q);
      rotation(GateKind::RY, q);
      rotation(GateKind::RZ, q);
    }
  }
  c.param_count = next;
  return c;
}

namespace {

void check_theta(const ParamCircuit& c, const RealVector& theta) {
  if (theta.size() != c.param_count) {
    throw DimensionError("theta length does not match the circuit's parameter count");
  }
}

double angle_of(const Gate& g, const RealVector& theta) {
  return g.param >= 0 ? theta(g.param) : 0.0;
}

}  // namespace

void apply_gate_left(Matrix& m, int n_qubits, const Gate& g, double angle) {
  check_qubits(m, n_qubits);
  if (g.kind == GateKind::CNOT) {
    cnot_rows(m, n_qubits, g.qubit, g.target);
  } else {
    left_2x2(m, n_qubits, g.qubit, rotation_matrix(g.kind, angle));
  }
}

void apply_gate_right_adjoint(Matrix& m, int n_qubits, const Gate& g, double angle) {
  if (m.cols() != (Eigen::Index{1} << n_qubits)) {
    throw DimensionError("gate kernel: matrix columns do not match qubit count");
  }
  if (g.kind == GateKind::CNOT) {
    cnot_cols(m, n_qubits, g.qubit, g.target);
  } else {
    right_adjoint_2x2(m, n_qubits, g.qubit, rotation_matrix(g.kind, angle));
  }
}

void conjugate_gate(Matrix& rho, int n_qubits, const Gate& g, double angle) {
  apply_gate_left(rho, n_qubits, g, angle);
  apply_gate_right_adjoint(rho, n_qubits, g, angle);
}

Matrix circuit_unitary(const ParamCircuit& c, const RealVector& theta) {
  check_theta(c, theta);
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : c.gates) apply_gate_left(u, c.n_qubits, g, angle_of(g, theta));
  return u;
}

void apply_circuit(Matrix& rho, const ParamCircuit& c, const RealVector& theta) {
  check_theta(c, theta);
  for (const Gate& g : c.gates) conjugate_gate(rho, c.n_qubits, g, angle_of(g, theta));
}

void apply_circuit_inverse(Matrix& rho, const ParamCircuit& c, const RealVector& theta) {
  check_theta(c, theta);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    conjugate_gate(rho, c.n_qubits, *it, -angle_of(*it, theta));
  }
}

namespace {

bool is_pure_column(const Matrix& s) { return s.cols() == 1; }

void evolve_input(Matrix& s, const ParamCircuit& c, const RealVector& theta) {
  if (!is_pure_column(s)) {
    apply_circuit(s, c, theta);
    return;
  }
  for (const Gate& g : c.gates) apply_gate_left(s, c.n_qubits, g, angle_of(g, theta));
}

}  // namespace

// ---------------------------------------------------------------------------
// Gradients

RealVector gradient(const std::function<double(const RealVector&)>& cost, const RealVector& theta,
                    GradientScheme scheme) {
  const double shift = scheme == GradientScheme::ParameterShift ? std::numbers::pi / 2.0
                                                                : kFiniteDifferenceStep;
  if (scheme == GradientScheme::Adjoint) {
    throw QaeError("adjoint gradients need a CircuitObjective, not an opaque cost");
  }
  RealVector g(theta.size());
  RealVector shifted = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    shifted(i) = theta(i) + shift;
    const double plus = cost(shifted);
    shifted(i) = theta(i) - shift;
    const double minus = cost(shifted);
    shifted(i) = theta(i);
    g(i) = scheme == GradientScheme::ParameterShift ? 0.5 * (plus - minus)
                                                    : (plus - minus) / (2.0 * shift);
  }
  return g;
}

Combiner Combiner::linear(double offset, double scale) {
  return {[offset, scale](const RealVector& e) { return offset + scale * e(0); },
          [scale](const RealVector& e) {
            RealVector g = RealVector::Zero(e.size());
            g(0) = scale;
            return g;
          }};
}

Combiner Combiner::one_minus_sum_squares() {
  return {[](const RealVector& e) { return 1.0 - e.squaredNorm(); },
          [](const RealVector& e) { return RealVector(-2.0 * e); }};
}

CircuitObjective::CircuitObjective(ParamCircuit circuit, std::vector<Matrix> states,
                                   std::vector<double> weights, std::vector<Matrix> observables,
                                   Combiner combine)
    : circuit_(std::move(circuit)),
      states_(std::move(states)),
      weights_(std::move(weights)),
      observables_(std::move(observables)),
      combine_(std::move(combine)) {
  const Eigen::Index dim = Eigen::Index{1} << circuit_.n_qubits;
  if (states_.empty()) throw QaeError("objective needs at least one input state");
  if (weights_.size() != states_.size()) throw DimensionError("one weight per state required");
  if (observables_.empty()) throw QaeError("objective needs at least one observable");
  for (const Matrix& s : states_) {
    if (s.rows() != dim || (s.cols() != dim && s.cols() != 1)) {
      throw DimensionError("state does not match circuit");
    }
  }
  for (const Matrix& o : observables_) {
    if (o.rows() != dim || o.cols() != dim) {
      throw DimensionError("observable does not match circuit");
    }
  }
}

RealVector CircuitObjective::expectations_of(const Matrix& rho_out) const {
  RealVector e(static_cast<Eigen::Index>(observables_.size()));
  for (std::size_t k = 0; k < observables_.size(); ++k) {
    e(static_cast<Eigen::Index>(k)) =
        is_pure_column(rho_out)
            ? (rho_out.col(0).adjoint() * observables_[k] * rho_out.col(0)).value().real()
            : trace_of_product(observables_[k], rho_out).real();
  }
  return e;
}

std::vector<RealVector> CircuitObjective::expectations(const RealVector& theta) const {
  std::vector<RealVector> out;
  out.reserve(states_.size());
  for (const Matrix& s : states_) {
    Matrix rho = s;
    evolve_input(rho, circuit_, theta);
    out.push_back(expectations_of(rho));
  }
  return out;
}

double CircuitObjective::value(const RealVector& theta) const {
  double total = 0.0;
  const auto exps = expectations(theta);
  for (std::size_t s = 0; s < states_.size(); ++s) total += weights_[s] * combine_.value(exps[s]);
  return total;
}

RealVector CircuitObjective::gradient(const RealVector& theta, GradientScheme scheme) const {
  check_theta(circuit_, theta);
  switch (scheme) {
    case GradientScheme::Adjoint:
      return adjoint_gradient(theta);
    case GradientScheme::ParameterShift:
      return shift_gradient(theta);
    case GradientScheme::CentralDifference:
      return qaelab::gradient([this](const RealVector& t) { return value(t); }, theta, scheme);
  }
  throw QaeError("unknown gradient scheme");
}

// Reverse-mode sweep. With rho and O both taken right after a rotation
// exp(-i a P / 2), d tr(O rho) / da = Im tr(O P rho).
RealVector CircuitObjective::adjoint_gradient(const RealVector& theta) const {
  const int n = circuit_.n_qubits;
  RealVector grad = RealVector::Zero(circuit_.param_count);
  for (std::size_t s = 0; s < states_.size(); ++s) {
    Matrix rho = states_[s];
    evolve_input(rho, circuit_, theta);
    const RealVector dfe = combine_.grad(expectations_of(rho));
    Matrix obs = Matrix::Zero(rho.rows(), rho.rows());
    for (std::size_t k = 0; k < observables_.size(); ++k) {
      obs += dfe(static_cast<Eigen::Index>(k)) * observables_[k];
    }
    if (is_pure_column(rho)) {
      // Statevector form: with lambda = O psi, the same derivative is Im <lambda|P|psi>.
      Matrix lambda = obs * rho;
      for (auto it = circuit_.gates.rbegin(); it != circuit_.gates.rend(); ++it) {
        const Gate& g = *it;
        const double angle = angle_of(g, theta);
        if (g.param >= 0) {
          grad(g.param) += weights_[s] * overlap_pauli(lambda, rho, n, g.qubit, g.kind).imag();
        }
        apply_gate_left(rho, n, g, -angle);
        apply_gate_left(lambda, n, g, -angle);
      }
      continue;
    }
    for (auto it = circuit_.gates.rbegin(); it != circuit_.gates.rend(); ++it) {
      const Gate& g = *it;
      const double angle = angle_of(g, theta);
      if (g.param >= 0) {
        grad(g.param) += weights_[s] * trace_obs_pauli_state(obs, rho, n, g.qubit, g.kind).imag();
      }
      conjugate_gate(rho, n, g, -angle);
      conjugate_gate(obs, n, g, -angle);
    }
  }
  return grad;
}

RealVector CircuitObjective::shift_gradient(const RealVector& theta) const {
  const double shift = std::numbers::pi / 2.0;
  RealVector grad = RealVector::Zero(circuit_.param_count);
  const auto base = expectations(theta);
  std::vector<RealVector> dfe;
  dfe.reserve(base.size());
  for (const RealVector& e : base) dfe.push_back(combine_.grad(e));

  RealVector shifted = theta;
  for (int i = 0; i < circuit_.param_count; ++i) {
    shifted(i) = theta(i) + shift;
    const auto plus = expectations(shifted);
    shifted(i) = theta(i) - shift;
    const auto minus = expectations(shifted);
    shifted(i) = theta(i);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      grad(i) += weights_[s] * dfe[s].dot(0.5 * (plus[s] - minus[s]));
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Adam and training

OptimizerState OptimizerState::for_params(Eigen::Index n, double learning_rate) {
  OptimizerState s;
  s.first_moment = RealVector::Zero(n);
  s.second_moment = RealVector::Zero(n);
  s.learning_rate = learning_rate;
  return s;
}

std::pair<OptimizerState, RealVector> adam_step(OptimizerState state, const RealVector& theta,
                                                const RealVector& grad) {
  if (theta.size() != grad.size() || state.first_moment.size() != theta.size() ||
      state.second_moment.size() != theta.size()) {
    throw DimensionError("adam_step: length mismatch");
  }
  state.step_count += 1;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, state.step_count);
  const double c2 = 1.0 - std::pow(state.beta2, state.step_count);
  const RealVector m_hat = state.first_moment / c1;
  const RealVector v_hat = state.second_moment / c2;
  RealVector next =
      theta.array() - state.learning_rate * m_hat.array() / (v_hat.array().sqrt() + state.eps_adam);
  return {std::move(state), std::move(next)};
}

RealVector random_angles(int count, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  RealVector theta(count);
  for (int i = 0; i < count; ++i) theta(i) = uniform(rng);
  return theta;
}

RealVector initial_angles(int count, const TrainConfig& cfg, Rng& rng) {
  if (cfg.init == InitKind::Uniform) return random_angles(count, rng);
  if (!(cfg.init_scale >= 0.0)) throw QaeError("init_scale must be non-negative");
  std::normal_distribution<double> normal(0.0, cfg.init_scale);
  RealVector theta(count);
  for (int i = 0; i < count; ++i) theta(i) = normal(rng);
  return theta;
}

TrainReport minimize(const CircuitObjective& objective, RealVector theta0, const TrainConfig& cfg) {
  if (cfg.max_iters < 0) throw QaeError("max_iters must be non-negative");
  TrainReport report;
  report.depth_p = objective.circuit().depth_p;
  OptimizerState opt = OptimizerState::for_params(theta0.size(), cfg.learning_rate);
  RealVector theta = std::move(theta0);

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (cfg.lr_decay && it == cfg.max_iters / 2) opt.learning_rate = cfg.learning_rate / 5.0;
    if (cfg.lr_decay && it == 3 * cfg.max_iters / 4) opt.learning_rate = cfg.learning_rate / 25.0;
    const double loss = objective.value(theta);
    report.loss_history.push_back(loss);
    const std::size_t n = report.loss_history.size();
    if (cfg.early_stop && n > static_cast<std::size_t>(cfg.window) &&
        std::abs(loss - report.loss_history[n - 1 - static_cast<std::size_t>(cfg.window)]) <
            cfg.tolerance) {
      report.converged = true;
      break;
    }
    const RealVector grad = objective.gradient(theta, cfg.scheme);
    std::tie(opt, theta) = adam_step(std::move(opt), theta, grad);
    report.iterations_used += 1;
  }
  if (!report.converged) report.loss_history.push_back(objective.value(theta));
  report.final_theta = std::move(theta);
  report.final_loss = report.loss_history.back();
  return report;
}

namespace {

TrainReport best_of_restarts(const CircuitObjective& objective, const TrainConfig& cfg, Rng& rng) {
  if (cfg.restarts < 1) throw QaeError("restarts must be >= 1");
  TrainReport best;
  for (int r = 0; r < cfg.restarts; ++r) {
    TrainReport run =
        minimize(objective, initial_angles(objective.circuit().param_count, cfg, rng), cfg);
    if (r == 0 || run.final_loss < best.final_loss) best = std::move(run);
  }
  return best;
}

}  // namespace

TrainReport train_circuit(int n_qubits, const ObjectiveFactory& factory, const TrainConfig& cfg) {
  Rng rng(cfg.seed);
  if (!cfg.adaptive_depth) {
    return best_of_restarts(factory(build_ansatz(n_qubits, cfg.depth_p)), cfg, rng);
  }
  if (cfg.depth_step < 1 || cfg.depth_cap < cfg.depth_p) {
    throw QaeError("adaptive depth schedule needs depth_step >= 1 and depth_cap >= depth_p");
  }
  TrainReport best;
  bool have_best = false;
  for (int p = cfg.depth_p; p <= cfg.depth_cap; p += cfg.depth_step) {
    TrainReport run = best_of_restarts(factory(build_ansatz(n_qubits, p)), cfg, rng);
    if (!have_best || run.final_loss < best.final_loss) {
      best = std::move(run);
      have_best = true;
    }
    if (best.final_loss <= cfg.depth_threshold) break;
  }
  best.converged = best.final_loss <= cfg.depth_threshold;
  return best;
}

}  // namespace qaelab
