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

#include "qaelab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qaelab/adiabatic.hpp"
#include "qaelab/autoencoder.hpp"
#include "qaelab/log.hpp"

namespace qaelab {

using json = nlohmann::json;

namespace {

template <typename E>
struct NamedEnum {
  std::string_view name;
  E value;
};

constexpr NamedEnum<ModelKind> kModels[] = {{"qae", ModelKind::Qae},
                                            {"nqae", ModelKind::Nqae},
                                            {"aqae", ModelKind::Aqae},
                                            {"naqae", ModelKind::Naqae},
                                            {"pqae", ModelKind::Pqae}};
constexpr NamedEnum<SystemKind> kSystems[] = {{"tfim", SystemKind::Tfim},
                                              {"werner", SystemKind::Werner},
                                              {"random", SystemKind::Random},
                                              {"custom", SystemKind::Custom}};
constexpr NamedEnum<SweepParameter> kSweeps[] = {{"beta", SweepParameter::Beta},
                                                 {"alpha", SweepParameter::Alpha},
                                                 {"t_a", SweepParameter::AnnealTime},
                                                 {"iterations", SweepParameter::Iterations},
                                                 {"ensemble_size", SweepParameter::EnsembleSize}};
constexpr NamedEnum<InitKind> kInits[] = {{"uniform", InitKind::Uniform},
                                          {"small_angle", InitKind::SmallAngle}};
constexpr NamedEnum<GradientScheme> kSchemes[] = {
    {"adjoint", GradientScheme::Adjoint},
    {"parameter_shift", GradientScheme::ParameterShift},
    {"central_difference", GradientScheme::CentralDifference}};
constexpr NamedEnum<LatentKind> kLatents[] = {{"cost", LatentKind::Cost},
                                              {"ising", LatentKind::Ising}};
constexpr NamedEnum<ProjectionMode> kProjections[] = {{"exact", ProjectionMode::Exact},
                                                      {"variational", ProjectionMode::Variational}};

template <typename E, std::size_t N>
std::string_view name_of(const NamedEnum<E> (&table)[N], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::string choices(const NamedEnum<E> (&table)[N]) {
  std::string out;
  for (const auto& entry : table) {
    if (!out.empty()) out += "|";
    out += entry.name;
  }
  return out;
}

// Typed access to one JSON object that remembers which keys were consumed.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError(key_path(key), "integer out of range");
    }
    return static_cast<int>(x);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(key_path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
    return v.get<std::string>();
  }

  template <typename E, std::size_t N>
  E choice(const std::string& key, const NamedEnum<E> (&table)[N], E fallback) {
    if (!has(key)) return fallback;
    return parse_choice(obj_.at(key), key_path(key), table);
  }

  template <typename E, std::size_t N>
  static E parse_choice(const json& v, const std::string& path, const NamedEnum<E> (&table)[N]) {
    if (!v.is_string()) throw ConfigError(path, "expected one of " + choices(table));
    const auto s = v.get<std::string>();
    for (const auto& entry : table) {
      if (entry.name == s) return entry.value;
    }
    throw ConfigError(path, "unknown value '" + s + "', expected one of " + choices(table));
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(obj_.at(key), key_path(key));
  }

  void reject_unknown() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(key_path(item.key()), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

Matrix parse_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw ConfigError(path, "matrix must be square");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw ConfigError(path, "matrix entries must be numbers");
      m(i, j) = x.get<double>();
    }
  }
  return m;
}

void parse_training(Section s, TrainConfig& t) {
  t.max_iters = s.integer("max_iters", t.max_iters);
  t.tolerance = s.number("tolerance", t.tolerance);
  t.window = s.integer("window", t.window);
  t.early_stop = s.boolean("early_stop", t.early_stop);
  t.learning_rate = s.number("learning_rate", t.learning_rate);
  t.lr_decay = s.boolean("lr_decay", t.lr_decay);
  t.init = s.choice("init", kInits, t.init);
  t.init_scale = s.number("init_scale", t.init_scale);
  t.restarts = s.integer("restarts", t.restarts);
  t.depth_p = s.integer("depth_p", t.depth_p);
  t.adaptive_depth = s.boolean("adaptive", t.adaptive_depth);
  t.depth_step = s.integer("depth_step", t.depth_step);
  t.depth_cap = s.integer("depth_cap", t.depth_cap);
  t.depth_threshold = s.number("depth_threshold", t.depth_threshold);
  t.scheme = s.choice("gradient", kSchemes, t.scheme);
  s.reject_unknown();

  if (t.max_iters < 0) throw ConfigError(s.key_path("max_iters"), "must be >= 0");
  if (!(t.tolerance > 0.0)) throw ConfigError(s.key_path("tolerance"), "must be > 0");
  if (t.window < 1) throw ConfigError(s.key_path("window"), "must be >= 1");
  if (!(t.learning_rate > 0.0)) throw ConfigError(s.key_path("learning_rate"), "must be > 0");
  if (!(t.init_scale >= 0.0)) throw ConfigError(s.key_path("init_scale"), "must be >= 0");
  if (t.restarts < 1) throw ConfigError(s.key_path("restarts"), "must be >= 1");
  if (t.depth_p < 0) throw ConfigError(s.key_path("depth_p"), "must be >= 0");
  if (t.adaptive_depth) {
    if (t.depth_step < 1) throw ConfigError(s.key_path("depth_step"), "must be >= 1");
    if (t.depth_cap < t.depth_p) throw ConfigError(s.key_path("depth_cap"), "must be >= depth_p");
  }
}

void parse_annealing(Section s, AnnealParams& a) {
  a.t_a = s.number("t_a", a.t_a);
  a.dt = s.number("dt", a.dt);
  a.latent = s.choice("latent", kLatents, a.latent);
  s.reject_unknown();
}

void parse_system_params(Section s, SystemParams& p) {
  p.beta = s.number("beta", p.beta);
  p.alpha = s.number("alpha", p.alpha);
  p.j_coupling = s.number("J", p.j_coupling);
  p.g_field = s.number("g", p.g_field);
  p.rank = s.integer("rank", p.rank);
  p.ensemble = s.boolean("ensemble", p.ensemble);
  p.ensemble_size = s.integer("ensemble_size", p.ensemble_size);
  p.projection = s.choice("projection", kProjections, p.projection);
  if (s.has("hamiltonian")) {
    Section h = s.child("hamiltonian");
    if (!h.has("real")) throw ConfigError(h.key_path("real"), "required");
    Matrix m = parse_matrix(h.raw("real"), h.key_path("real"));
    if (h.has("imag")) {
      const Matrix im = parse_matrix(h.raw("imag"), h.key_path("imag"));
      if (im.rows() != m.rows()) throw ConfigError(h.key_path("imag"), "shape differs from real part");
      m += Complex(0.0, 1.0) * im.real().cast<Complex>();
    }
    h.reject_unknown();
    p.hamiltonian = std::move(m);
  }
  s.reject_unknown();
}

bool is_annealed(ModelKind m) { return m == ModelKind::Aqae || m == ModelKind::Naqae; }
bool is_trained(ModelKind m) { return m == ModelKind::Qae || m == ModelKind::Nqae || m == ModelKind::Pqae; }

bool uses_ensemble(const ExperimentConfig& cfg, ModelKind m) {
  if (m == ModelKind::Pqae) return true;
  return cfg.system == SystemKind::Random &&
         (cfg.params.ensemble || cfg.sweep == SweepParameter::EnsembleSize);
}

// Config with the sweep value substituted in.
struct PointConfig {
  SystemParams params;
  AnnealParams annealing;
  TrainConfig training;
};

PointConfig at_point(const ExperimentConfig& cfg, double value) {
  PointConfig p{cfg.params, cfg.annealing, cfg.training};
  switch (cfg.sweep) {
    case SweepParameter::Beta:
      p.params.beta = value;
      break;
    case SweepParameter::Alpha:
      p.params.alpha = value;
      break;
    case SweepParameter::AnnealTime:
      p.annealing.t_a = value;
      break;
    case SweepParameter::Iterations:
      p.training.max_iters = static_cast<int>(value);
      p.training.early_stop = false;
      break;
    case SweepParameter::EnsembleSize:
      p.params.ensemble_size = static_cast<int>(value);
      break;
  }
  return p;
}

void validate_point(const ExperimentConfig& cfg, const PointConfig& p, const std::string& where) {
  const auto fail = [&](const std::string& key, const std::string& what) {
    throw ConfigError(where.empty() ? key : where, what);
  };
  if (!(p.params.beta >= 0.0) || !std::isfinite(p.params.beta)) {
    fail("system_params.beta", "beta must be finite and >= 0");
  }
  if (cfg.system == SystemKind::Werner) {
    const bool strict = std::any_of(cfg.models.begin(), cfg.models.end(), is_annealed);
    if (strict && !(p.params.alpha > -1.0 && p.params.alpha < 1.0)) {
      fail("system_params.alpha",
           "alpha must lie strictly inside (-1, 1) for annealed models (log-Hamiltonian is singular)");
    }
    if (!(p.params.alpha >= -1.0 && p.params.alpha <= 1.0)) {
      fail("system_params.alpha", "alpha must lie in [-1, 1]");
    }
  }
  if (std::any_of(cfg.models.begin(), cfg.models.end(), is_annealed)) {
    if (!(p.annealing.t_a > 0.0) || !std::isfinite(p.annealing.t_a)) {
      fail("annealing.t_a", "t_a must be > 0");
    }
    if (!(p.annealing.dt > 0.0) || p.annealing.dt > p.annealing.t_a) {
      fail("annealing.dt", "dt must lie in (0, t_a]");
    }
  }
  if (p.training.max_iters < 0) fail("training.max_iters", "must be >= 0");
  if (p.params.ensemble_size < 1) fail("system_params.ensemble_size", "must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PreparedSystem {
  DensityMatrix rho;
  /// Hamiltonian and inverse temperature with rho = exp(-beta h) / Z, for annealing.
  std::optional<Hamiltonian> h;
  double beta = 1.0;
};

PreparedSystem prepare_system(const ExperimentConfig& cfg, const PointConfig& p, Rng& rng,
                              bool need_hamiltonian) {
  const int n = cfg.n_a + cfg.n_b;
  switch (cfg.system) {
    case SystemKind::Tfim: {
      Hamiltonian h = tfim_hamiltonian(n, p.params.j_coupling, p.params.g_field);
      DensityMatrix rho = thermal_state(h, p.params.beta);
      return {std::move(rho), std::move(h), p.params.beta};
    }
    case SystemKind::Werner: {
      const Eigen::Index d = Eigen::Index{1} << (n / 2);
      DensityMatrix rho = werner_state(d, p.params.alpha);
      if (!need_hamiltonian) return {std::move(rho), std::nullopt, 1.0};
      return {std::move(rho), werner_log_hamiltonian(d, p.params.alpha), 1.0};
    }
    case SystemKind::Random: {
      const Eigen::Index d = Eigen::Index{1} << n;
      const Eigen::Index rank = p.params.rank == 0 ? d : p.params.rank;
      DensityMatrix rho = random_density_matrix(d, rank, rng);
      if (!need_hamiltonian) return {std::move(rho), std::nullopt, 1.0};
      Hamiltonian h(hermitian_function(rho.matrix(), [](double x) { return -std::log(x); }));
      return {std::move(rho), std::move(h), 1.0};
    }
    case SystemKind::Custom: {
      Hamiltonian h(*p.params.hamiltonian);
      DensityMatrix rho = thermal_state(h, p.params.beta);
      return {std::move(rho), std::move(h), p.params.beta};
    }
  }
  throw QaeError("unknown system");
}

ResultRow compute_point(const ExperimentConfig& cfg, ModelKind model, double value,
                        std::uint64_t seed) {
  const PointConfig p = at_point(cfg, value);
  const Bipartition part(cfg.n_a, cfg.n_b);
  Rng rng(seed);
  TrainConfig training = p.training;
  training.seed = splitmix64(seed);

  ResultRow row;
  row.sweep_value = value;

  if (uses_ensemble(cfg, model)) {
    const PureEnsemble ens = PureEnsemble::haar(part.n_qubits(), p.params.ensemble_size, rng);
    if (model == ModelKind::Pqae) {
      const PqaeReport r = pqae_pipeline(ens, part, training, p.params.projection);
      row.fidelity = r.mean_fidelity;
      row.final_loss = r.train.final_loss;
      row.iterations = r.train.iterations_used;
      row.converged = r.train.converged || !training.early_stop;
    } else {
      const EnsembleQaeReport r = ensemble_qae(ens, part, training);
      row.fidelity = r.mean_fidelity;
      row.final_loss = r.train.final_loss;
      row.iterations = r.train.iterations_used;
      row.converged = r.train.converged || !training.early_stop;
    }
    return row;
  }

  const PreparedSystem sys = prepare_system(cfg, p, rng, is_annealed(model));
  if (is_annealed(model)) {
    const QaeVariant variant =
        model == ModelKind::Naqae ? QaeVariant::NoiseAssisted : QaeVariant::Standard;
    const Hamiltonian h_l = latent_hamiltonian(cfg.n_a, cfg.n_b, p.annealing.latent);
    const AqaeReport r =
        aqae_run(sys.rho, *sys.h, part, h_l, p.annealing.t_a, variant, p.annealing.dt);
    row.fidelity = r.fidelity;
    row.input_entropy = r.input_entropy;
    row.output_entropy = r.output_entropy;
    row.final_loss = r.trash_cost;
    row.epsilons = r.noise.epsilon;
    row.iterations = r.steps;
    row.converged = true;
    return row;
  }

  const QaeVariant variant =
      model == ModelKind::Nqae ? QaeVariant::NoiseAssisted : QaeVariant::Standard;
  const PipelineResult r = run_pipeline(sys.rho, part, variant, training);
  row.fidelity = r.fidelity;
  row.input_entropy = r.input_entropy;
  row.output_entropy = r.output_entropy;
  row.final_loss = r.train.final_loss;
  row.epsilons = r.noise.epsilon;
  row.iterations = r.train.iterations_used;
  // Without early stopping a fixed-budget run counts as complete.
  row.converged = r.train.converged || (!training.early_stop && !training.adaptive_depth);
  return row;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json row_to_json(const ResultRow& r) {
  return json{{"sweep_value", r.sweep_value},     {"fidelity", r.fidelity},
              {"input_entropy", r.input_entropy}, {"output_entropy", r.output_entropy},
              {"final_loss", r.final_loss},       {"epsilons", r.epsilons},
              {"iterations", r.iterations},       {"wall_seconds", r.wall_seconds},
              {"converged", r.converged}};
}

}  // namespace

std::string_view to_string(ModelKind m) { return name_of(kModels, m); }
std::string_view to_string(SystemKind s) { return name_of(kSystems, s); }
std::string_view to_string(SweepParameter p) { return name_of(kSweeps, p); }

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  Section s(root, "");
  ExperimentConfig cfg;
  cfg.name = s.string("name", "");

  if (!s.has("model")) throw ConfigError("model", "required");
  const json& model = s.raw("model");
  if (model.is_array()) {
    if (model.empty()) throw ConfigError("model", "list must not be empty");
    for (std::size_t i = 0; i < model.size(); ++i) {
      cfg.models.push_back(
          Section::parse_choice(model[i], "model[" + std::to_string(i) + "]", kModels));
    }
  } else {
    cfg.models.push_back(Section::parse_choice(model, "model", kModels));
  }

  if (!s.has("system")) throw ConfigError("system", "required");
  cfg.system = s.choice("system", kSystems, SystemKind::Tfim);
  if (!s.has("n_A")) throw ConfigError("n_A", "required");
  if (!s.has("n_B")) throw ConfigError("n_B", "required");
  cfg.n_a = s.integer("n_A", 0);
  cfg.n_b = s.integer("n_B", 0);

  if (!s.has("sweep")) throw ConfigError("sweep", "required");
  {
    Section sw = s.child("sweep");
    if (!sw.has("parameter")) throw ConfigError("sweep.parameter", "required");
    cfg.sweep = sw.choice("parameter", kSweeps, SweepParameter::Beta);
    if (!sw.has("values")) throw ConfigError("sweep.values", "required");
    const json& values = sw.raw("values");
    if (!values.is_array()) throw ConfigError("sweep.values", "expected an array of numbers");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number()) {
        throw ConfigError("sweep.values[" + std::to_string(i) + "]", "expected a number");
      }
      cfg.grid.push_back(values[i].get<double>());
    }
    sw.reject_unknown();
  }

  cfg.seed = s.unsigned_integer("seed", 0);
  if (s.has("training")) parse_training(s.child("training"), cfg.training);
  if (s.has("annealing")) parse_annealing(s.child("annealing"), cfg.annealing);
  if (s.has("system_params")) parse_system_params(s.child("system_params"), cfg.params);
  cfg.output_path = s.string("output_path", "");
  cfg.timing = s.boolean("timing", true);
  s.reject_unknown();

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.models.empty()) throw ConfigError("model", "at least one model is required");
  if (cfg.n_a < 1) throw ConfigError("n_A", "must be >= 1");
  if (cfg.n_b < 1) throw ConfigError("n_B", "must be >= 1");
  if (cfg.n_a + cfg.n_b > 10) throw ConfigError("n_B", "n_A + n_B must be <= 10");
  if (cfg.grid.empty()) throw ConfigError("sweep.values", "grid must not be empty");
  const int n = cfg.n_a + cfg.n_b;

  const bool annealed = std::any_of(cfg.models.begin(), cfg.models.end(), is_annealed);
  const bool trained = std::any_of(cfg.models.begin(), cfg.models.end(), is_trained);
  const bool pqae = std::find(cfg.models.begin(), cfg.models.end(), ModelKind::Pqae) != cfg.models.end();

  switch (cfg.system) {
    case SystemKind::Werner:
      if (n % 2 != 0) throw ConfigError("n_B", "werner needs an even total qubit count");
      break;
    case SystemKind::Random:
      if (cfg.params.rank < 0 || cfg.params.rank > (1 << n)) {
        throw ConfigError("system_params.rank", "must lie in [0, 2^(n_A + n_B)]");
      }
      if (annealed && cfg.params.rank != 0 && cfg.params.rank != (1 << n)) {
        throw ConfigError("system_params.rank", "annealed models need a full-rank random state");
      }
      break;
    case SystemKind::Custom:
      if (!cfg.params.hamiltonian) throw ConfigError("system_params.hamiltonian", "required for custom");
      if (cfg.params.hamiltonian->rows() != (Eigen::Index{1} << n)) {
        throw ConfigError("system_params.hamiltonian", "dimension must be 2^(n_A + n_B)");
      }
      try {
        Hamiltonian check(*cfg.params.hamiltonian);
      } catch (const QaeError& e) {
        throw ConfigError("system_params.hamiltonian", e.what());
      }
      break;
    case SystemKind::Tfim:
      if (n < 2) throw ConfigError("n_B", "tfim needs at least two qubits");
      break;
  }

  if (pqae && cfg.system != SystemKind::Random) {
    throw ConfigError("system", "pqae runs on Haar-random pure ensembles (system 'random')");
  }
  for (ModelKind m : cfg.models) {
    if (uses_ensemble(cfg, m) && m != ModelKind::Qae && m != ModelKind::Pqae) {
      throw ConfigError("model", std::string(to_string(m)) + " does not accept pure-state ensembles");
    }
  }

  switch (cfg.sweep) {
    case SweepParameter::Beta:
      if (cfg.system != SystemKind::Tfim && cfg.system != SystemKind::Custom) {
        throw ConfigError("sweep.parameter", "beta sweeps need system tfim or custom");
      }
      break;
    case SweepParameter::Alpha:
      if (cfg.system != SystemKind::Werner) {
        throw ConfigError("sweep.parameter", "alpha sweeps need system werner");
      }
      break;
    case SweepParameter::AnnealTime:
      if (trained) throw ConfigError("sweep.parameter", "t_a sweeps apply to aqae and naqae only");
      break;
    case SweepParameter::Iterations:
      if (annealed) throw ConfigError("sweep.parameter", "iteration sweeps apply to trained models only");
      break;
    case SweepParameter::EnsembleSize:
      if (cfg.system != SystemKind::Random) {
        throw ConfigError("sweep.parameter", "ensemble_size sweeps need system random");
      }
      break;
  }

  // Fixed parameters first, so a bad value is reported under its own key.
  validate_point(cfg, PointConfig{cfg.params, cfg.annealing, cfg.training}, "");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    const double v = cfg.grid[i];
    const std::string where = "sweep.values[" + std::to_string(i) + "]";
    if (!std::isfinite(v)) throw ConfigError(where, "must be finite");
    if ((cfg.sweep == SweepParameter::Iterations || cfg.sweep == SweepParameter::EnsembleSize) &&
        (v != std::floor(v) || v < 0.0)) {
      throw ConfigError(where, "must be a non-negative integer");
    }
    validate_point(cfg, at_point(cfg, v), where);
  }
}

std::string config_reference() {
  std::ostringstream os;
  const TrainConfig t;
  const AnnealParams a;
  const SystemParams p;
  os << "Config keys (JSON object):\n"
     << "  name           string, optional label\n"
     << "  model          " << choices(kModels) << ", or a list of them (required)\n"
     << "  system         " << choices(kSystems) << " (required)\n"
     << "  n_A, n_B       latent and trash qubit counts, >= 1, n_A + n_B <= 10 (required)\n"
     << "  sweep          {parameter: " << choices(kSweeps) << ", values: [numbers]} (required)\n"
     << "  seed           non-negative integer, default 0\n"
     << "  output_path    string, default stdout\n"
     << "  timing         bool, default true; false writes wall_seconds as 0\n"
     << "  training.      max_iters " << t.max_iters << ", tolerance " << t.tolerance << ", window "
     << t.window << ", early_stop true, learning_rate " << t.learning_rate
     << ", lr_decay false, init small_angle|uniform (small_angle), init_scale " << t.init_scale
     << ", restarts " << t.restarts << ", depth_p " << t.depth_p << ", adaptive false, depth_step "
     << t.depth_step << ", depth_cap " << t.depth_cap << ", depth_threshold " << t.depth_threshold
     << ", gradient " << choices(kSchemes) << " (adjoint)\n"
     << "  annealing.     t_a " << a.t_a << ", dt " << a.dt << ", latent " << choices(kLatents)
     << " (cost)\n"
     << "  system_params. beta " << p.beta << ", alpha " << p.alpha << ", J " << p.j_coupling
     << ", g " << p.g_field << ", rank 0 (full), ensemble false, ensemble_size "
     << p.ensemble_size << ", projection " << choices(kProjections)
     << " (exact), hamiltonian {real: [[...]], imag: [[...]]} for custom\n";
  return os.str();
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0x5851f42d4c957f2dULL + index));
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("QAE_LAB_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    log_warning("ignoring QAE_LAB_WORKERS='" + std::string(env) + "', expected a positive integer");
  }
  return std::max(1, requested);
}

std::vector<ResultRow> run_model(const ExperimentConfig& cfg, ModelKind model, int workers) {
  validate(cfg);
  const std::size_t points = cfg.grid.size();
  std::vector<ResultRow> rows(points);
  std::atomic<std::size_t> next{0};

  const auto work = [&]() {
    for (std::size_t i = next++; i < points; i = next++) {
      const auto start = std::chrono::steady_clock::now();
      ResultRow row;
      try {
        row = compute_point(cfg, model, cfg.grid[i], point_seed(cfg.seed, i));
      } catch (const std::exception& e) {
        log_warning("sweep point " + format_double(cfg.grid[i]) + " failed: " + e.what());
        row = ResultRow{};
        row.sweep_value = cfg.grid[i];
        row.converged = false;
      }
      if (cfg.timing) {
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      rows[i] = std::move(row);
    }
  };

  const int n_threads = static_cast<int>(std::min<std::size_t>(points, std::max(1, workers)));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return a.sweep_value < b.sweep_value;
  });
  return rows;
}

std::vector<ModelResults> run_experiment(const ExperimentConfig& cfg, int workers) {
  std::vector<ModelResults> out;
  for (ModelKind m : cfg.models) out.push_back({m, run_model(cfg, m, workers)});
  return out;
}

std::string format_results(const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const ResultRow& r : rows) arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
  }
  std::string out(kCsvHeader);
  out += "\n";
  for (const ResultRow& r : rows) {
    std::string eps;
    for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
      if (k > 0) eps += ";";
      eps += format_double(r.epsilons[k]);
    }
    out += format_double(r.sweep_value) + "," + format_double(r.fidelity) + "," +
           format_double(r.input_entropy) + "," + format_double(r.output_entropy) + "," +
           format_double(r.final_loss) + "," + eps + "," + std::to_string(r.iterations) + "," +
           format_double(r.wall_seconds) + "," + (r.converged ? "true" : "false") + "\n";
  }
  return out;
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  if (rows.empty()) throw QaeError("emit_results: no rows");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw QaeError("cannot write " + path);
  out << format_results(rows, format);
  out.flush();
  if (!out) throw QaeError("error while writing " + path);
}

std::vector<ResultRow> parse_results_json(std::string_view text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw QaeError("results JSON must be an array");
  std::vector<ResultRow> rows;
  for (const json& j : arr) {
    ResultRow r;
    r.sweep_value = j.at("sweep_value").get<double>();
    r.fidelity = j.at("fidelity").get<double>();
    r.input_entropy = j.at("input_entropy").get<double>();
    r.output_entropy = j.at("output_entropy").get<double>();
    r.final_loss = j.at("final_loss").get<double>();
    r.epsilons = j.at("epsilons").get<std::vector<double>>();
    r.iterations = j.at("iterations").get<int>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.converged = j.at("converged").get<bool>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string model_output_path(const std::string& path, ModelKind model) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / p.stem();
  out += "_" + std::string(to_string(model));
  out += p.extension();
  return out.string();
}

void write_experiment(const std::vector<ModelResults>& results, OutputFormat format,
                      const std::string& path) {
  if (!path.empty()) {
    for (const ModelResults& r : results) {
      emit_results(r.rows, format, results.size() == 1 ? path : model_output_path(path, r.model));
    }
    return;
  }
  for (const ModelResults& r : results) {
    if (results.size() > 1) std::cout << "# model: " << to_string(r.model) << "\n";
    std::cout << format_results(r.rows, format);
  }
  std::cout.flush();
}

}  // namespace qaelab
