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

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qaelab/qstate.hpp"

namespace qaelab {

enum class GateKind { RY, RZ, CNOT };

/// One gate of the ansatz. Rotations carry the index of their angle in theta;
/// CNOT uses `qubit` as control and `target` as target.
struct Gate {
  GateKind kind;
  int qubit;
  int target = -1;
  int param = -1;
};

/// Layered hardware-efficient ansatz: RY then RZ on every qubit, followed by
/// `depth_p` blocks of [CNOT ladder (0,1),(1,2),...; RZ, RY, RZ on every qubit].
struct ParamCircuit {
  int n_qubits = 0;
  int depth_p = 0;
  int param_count = 0;
  std::vector<Gate> gates;
};

ParamCircuit build_ansatz(int n_qubits, int depth_p);

/// The full unitary U(theta), gates composed in layout order.
Matrix circuit_unitary(const ParamCircuit& c, const RealVector& theta);

// In-place gate kernels on dim x dim (or dim x k) matrices, qubit 0 most significant.
void apply_gate_left(Matrix& m, int n_qubits, const Gate& g, double angle);
void apply_gate_right_adjoint(Matrix& m, int n_qubits, const Gate& g, double angle);
/// rho <- G rho G^dagger
void conjugate_gate(Matrix& rho, int n_qubits, const Gate& g, double angle);
/// rho <- U rho U^dagger
void apply_circuit(Matrix& rho, const ParamCircuit& c, const RealVector& theta);
/// rho <- U^dagger rho U
void apply_circuit_inverse(Matrix& rho, const ParamCircuit& c, const RealVector& theta);

enum class GradientScheme { Adjoint, ParameterShift, CentralDifference };

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Gradient of an arbitrary scalar cost. Parameter shift uses +-pi/2 shifts and
/// is exact only for expectation values of a fixed observable after the ansatz.
RealVector gradient(const std::function<double(const RealVector&)>& cost, const RealVector& theta,
                    GradientScheme scheme);

/// Scalar function of a vector of expectation values, with its gradient.
struct Combiner {
  std::function<double(const RealVector&)> value;
  std::function<RealVector(const RealVector&)> grad;

  /// offset + scale * e[0]
  static Combiner linear(double offset, double scale);
  /// 1 - sum_k e[k]^2
  static Combiner one_minus_sum_squares();
};

/// Cost of the form sum_s w_s f(e_s), e_{s,k} = tr(O_k U(theta) rho_s U(theta)^dagger).
/// A state given as a dim x 1 column is treated as the pure state |psi><psi| and
/// propagated as a vector.
///
/// Every trainable loss in the library (trash, diagonalization, projected and
/// projection losses) has this shape, which makes all three gradient schemes
/// available and exact up to the finite-difference truncation.
class CircuitObjective {
 public:
  CircuitObjective(ParamCircuit circuit, std::vector<Matrix> states, std::vector<double> weights,
                   std::vector<Matrix> observables, Combiner combine);

  const ParamCircuit& circuit() const { return circuit_; }
  double value(const RealVector& theta) const;
  RealVector gradient(const RealVector& theta, GradientScheme scheme) const;
  /// Per-state expectation vectors at theta.
  std::vector<RealVector> expectations(const RealVector& theta) const;

 private:
  RealVector expectations_of(const Matrix& rho_out) const;
  RealVector adjoint_gradient(const RealVector& theta) const;
  RealVector shift_gradient(const RealVector& theta) const;

  ParamCircuit circuit_;
  std::vector<Matrix> states_;
  std::vector<double> weights_;
  std::vector<Matrix> observables_;
  Combiner combine_;
};

struct OptimizerState {
  RealVector first_moment;
  RealVector second_moment;
  int step_count = 0;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;

  static OptimizerState for_params(Eigen::Index n, double learning_rate = 0.05);
};

/// One bias-corrected Adam update. Returns the advanced state and new theta.
std::pair<OptimizerState, RealVector> adam_step(OptimizerState state, const RealVector& theta,
                                                const RealVector& grad);

enum class InitKind {
  /// Every angle uniform in [0, 2*pi).
  Uniform,
  /// Every angle normal with mean 0 and standard deviation init_scale.
  SmallAngle,
};

struct TrainConfig {
  int max_iters = 2000;
  /// Stop when |loss(i) - loss(i - window)| < tolerance.
  double tolerance = 1e-5;
  int window = 25;
  bool early_stop = true;
  double learning_rate = 0.05;
  /// Step the learning rate down by 5x at max_iters/2 and again at 3*max_iters/4.
  bool lr_decay = false;
  InitKind init = InitKind::SmallAngle;
  double init_scale = 0.1;
  /// Independent starts per depth; the lowest final loss wins.
  int restarts = 1;
  int depth_p = 2;
  bool adaptive_depth = false;
  int depth_step = 2;
  int depth_cap = 8;
  /// Adaptive schedule retrains deeper while the converged loss exceeds this.
  double depth_threshold = 1e-3;
  std::uint64_t seed = 0;
  GradientScheme scheme = GradientScheme::Adjoint;
};

struct TrainReport {
  RealVector final_theta;
  std::vector<double> loss_history;
  bool converged = false;
  int iterations_used = 0;
  double final_loss = 0.0;
  int depth_p = 0;
};

/// theta drawn uniformly from [0, 2*pi).
RealVector random_angles(int count, Rng& rng);

/// Starting angles according to cfg.init.
RealVector initial_angles(int count, const TrainConfig& cfg, Rng& rng);

/// Adam loop on a fixed objective from theta0.
TrainReport minimize(const CircuitObjective& objective, RealVector theta0, const TrainConfig& cfg);

/// Builds the objective for a given ansatz; used by the depth schedule.
using ObjectiveFactory = std::function<CircuitObjective(const ParamCircuit&)>;

/// Trains at cfg.depth_p, or with the adaptive schedule p = depth_p, +depth_step,
/// ... up to depth_cap while the loss stays above depth_threshold. Each depth
/// gets cfg.restarts independent starts. Returns the best run; `converged` is
/// false when the cap is hit above threshold.
TrainReport train_circuit(int n_qubits, const ObjectiveFactory& factory, const TrainConfig& cfg);

}  // namespace qaelab
