/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qsci/circuit.hpp"
#include "qsci/evolution.hpp"
#include "qsci/fci.hpp"
#include "qsci/jordan_wigner.hpp"
#include "qsci/pool.hpp"
#include "qsci/qsci.hpp"
#include "qsci/rng.hpp"

namespace qsci {

// RNG stream labels shared by all baselines so that runs are reproducible and
// the single/multiple time-evolved variants coincide for k_list = {1}:
// circuit i uses child(1, i) for randomized-compilation draws and child(2, i)
// for measurement sampling; objective evaluation e uses child(3, e).

/// Time-evolved state-preparation family: evolve the Hartree-Fock state for
/// times k * delta_t using single-step first-order Trotter circuits.
struct TimeEvolvedConfig {
  enum class Mode { Single, Multiple };
  Mode mode = Mode::Single;
  double delta_t = 1.0;
  std::vector<int> k_list{1};
  int trotter_steps = 1;
  std::uint64_t n_shots = 100000;

  static TimeEvolvedConfig single(double delta_t, std::uint64_t n_shots) {
    TimeEvolvedConfig cfg;
    cfg.mode = Mode::Single;
    cfg.delta_t = delta_t;
    cfg.k_list = {1};
    cfg.n_shots = n_shots;
    return cfg;
  }

  /// Multiple variant: delta_t fixed to 1, k = 1..5, shots split uniformly.
  static TimeEvolvedConfig multiple(std::uint64_t n_shots) {
    TimeEvolvedConfig cfg;
    cfg.mode = Mode::Multiple;
    cfg.delta_t = 1.0;
    cfg.k_list = {1, 2, 3, 4, 5};
    cfg.n_shots = n_shots;
    return cfg;
  }

  void validate() const {
    if (delta_t <= 0.0) throw std::invalid_argument("time_evolved: delta_t must be > 0");
    if (trotter_steps < 1) throw std::invalid_argument("time_evolved: trotter_steps must be >= 1");
    if (k_list.empty()) throw std::invalid_argument("time_evolved: empty k_list");
    if (mode == Mode::Single && k_list != std::vector<int>{1})
      throw std::invalid_argument("time_evolved: single mode requires k_list = {1}");
  }
};

struct SqDriftConfig {
  int n_excitations = 100; // qDRIFT gates per circuit
  int randomizations = 500;
  std::vector<int> k_list{1, 2, 3};
  std::uint64_t n_shots = 100000;

  void validate() const {
    if (n_excitations < 1) throw std::invalid_argument("sqdrift: n_excitations must be >= 1");
    if (randomizations < 1) throw std::invalid_argument("sqdrift: randomizations must be >= 1");
    if (k_list.empty()) throw std::invalid_argument("sqdrift: empty k_list");
  }
};

namespace detail {

// Uniform shot split with the remainder assigned to the earliest circuits;
// shares sum exactly to the budget.
inline std::vector<std::uint64_t> shot_shares(std::uint64_t budget, std::size_t n_circuits) {
  std::vector<std::uint64_t> shares(n_circuits, budget / n_circuits);
  for (std::size_t i = 0; i < budget % n_circuits; ++i) ++shares[i];
  return shares;
}

inline SampledWavefunction qsci_pipeline(const ShotHistogram &hist, std::size_t d_max,
                                         const MolecularIntegrals &ints) {
  auto set = select_determinants(hist, {ints.n_alpha, ints.n_beta});
  if (set.size() == 0)
    throw std::runtime_error("qsci pipeline: no sampled determinant lies in the target sector");
  set = truncate(symmetry_complete(set), d_max);
  return diagonalize_subspace(set, ints);
}

} // namespace detail

/// Merged measurement histogram over the k_list circuits (counts summed).
inline ShotHistogram time_evolved_histogram(const TimeEvolvedConfig &cfg,
                                            const MolecularIntegrals &ints, RngStream &rng) {
  cfg.validate();
  const auto h = jordan_wigner(ints);
  const auto hf = hf_determinant(ints);
  const auto shares = detail::shot_shares(cfg.n_shots, cfg.k_list.size());
  ShotHistogram merged;
  for (std::size_t idx = 0; idx < cfg.k_list.size(); ++idx) {
    const auto circuit =
        trotter_circuit(h, cfg.k_list[idx] * cfg.delta_t, cfg.trotter_steps, hf);
    const auto state = run_circuit(circuit);
    auto stream = rng.child(2, idx);
    merged.merge(sample(state, shares[idx], stream));
  }
  return merged;
}

inline SampledWavefunction time_evolved_qsci(const TimeEvolvedConfig &cfg,
                                             const MolecularIntegrals &ints, std::size_t d_max,
                                             RngStream &rng) {
  return detail::qsci_pipeline(time_evolved_histogram(cfg, ints, rng), d_max, ints);
}

/// Per-circuit histograms of the randomized-evolution family: for each k and
/// each of `randomizations` independent qDRIFT draws at time t = k, the
/// circuit's shot share is sampled. One sampled excitation corresponds to one
/// qDRIFT gate.
inline std::vector<ShotHistogram> sqdrift_histograms(const SqDriftConfig &cfg,
                                                     const MolecularIntegrals &ints,
                                                     RngStream &rng) {
  cfg.validate();
  const auto h = jordan_wigner(ints);
  const auto hf = hf_determinant(ints);
  const std::size_t n_circuits = cfg.k_list.size() * static_cast<std::size_t>(cfg.randomizations);
  const auto shares = detail::shot_shares(cfg.n_shots, n_circuits);

  std::vector<ShotHistogram> hists;
  hists.reserve(n_circuits);
  std::size_t idx = 0;
  for (const int k : cfg.k_list)
    for (int r = 0; r < cfg.randomizations; ++r, ++idx) {
      auto draw_stream = rng.child(1, idx);
      const auto circuit =
          qdrift_circuit(h, static_cast<double>(k), cfg.n_excitations, hf, draw_stream);
      const auto state = run_circuit(circuit);
      auto sample_stream = rng.child(2, idx);
      hists.push_back(sample(state, shares[idx], sample_stream));
    }
  return hists;
}

inline SampledWavefunction sqdrift_qsci(const SqDriftConfig &cfg, const MolecularIntegrals &ints,
                                        std::size_t d_max, RngStream &rng) {
  ShotHistogram merged;
  for (const auto &h : sqdrift_histograms(cfg, ints, rng)) merged.merge(h);
  return detail::qsci_pipeline(merged, d_max, ints);
}

/// Reference family: sample determinants directly from the exact ground-state
/// distribution of the sector.
inline SampledWavefunction exact_state_qsci(const MolecularIntegrals &ints, std::uint64_t n_shots,
                                            std::size_t d_max, RngStream &rng,
                                            const FciOptions &fci_opts = {}) {
  const auto [e_fci, wf] = fci_ground_state(ints, fci_opts);
  std::vector<Determinant> dets;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto &[d, c] : wf.coeffs) {
    acc += c * c;
    dets.push_back(d);
    cdf.push_back(acc);
  }
  auto stream = rng.child(2, 0);
  ShotHistogram hist;
  hist.n_shots = n_shots;
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = stream.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t i = it == cdf.end() ? cdf.size() - 1
                                          : static_cast<std::size_t>(it - cdf.begin());
    ++hist.counts[dets[i].spin_orbital_bits()];
  }
  return detail::qsci_pipeline(hist, d_max, ints);
}

// ===================== simultaneous-perturbation VQE =====================

/// Decay schedules eta_t = eta0/(t+A+1)^0.602 and c_t = c0/(t+1)^0.101, with
/// five Rademacher perturbations averaged per iteration.
struct GspgsSchedule {
  double eta0 = 0.1;
  double eta_exp = 0.602;
  double offset_a = 10.0;
  double c0 = 0.05;
  double c_exp = 0.101;
  int n_perturbations = 5;
  int iterations = 100;

  double eta(int t) const { return eta0 / std::pow(t + offset_a + 1.0, eta_exp); }
  double c(int t) const { return c0 / std::pow(t + 1.0, c_exp); }
};

/// Averaged symmetric simultaneous-perturbation gradient estimate at theta.
/// Calls the objective 2 * n_perturbations times; eval_counter advances once
/// per call so stochastic objectives see fresh streams.
template <class Objective>
Eigen::VectorXd gspgs_gradient_estimate(Objective &&objective, const Eigen::VectorXd &theta,
                                        double c, int n_perturbations, RngStream &rng,
                                        std::uint64_t &eval_counter) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (int r = 0; r < n_perturbations; ++r) {
    Eigen::VectorXd delta(theta.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i) delta(i) = rng.rademacher();
    const double f_plus = objective(Eigen::VectorXd(theta + c * delta), eval_counter++);
    const double f_minus = objective(Eigen::VectorXd(theta - c * delta), eval_counter++);
    grad += ((f_plus - f_minus) / (2.0 * c)) * delta;
  }
  return grad / static_cast<double>(n_perturbations);
}

struct GspgsTraceRow {
  int iter = 0;
  double grad_norm = 0.0;
  double best_energy = 0.0;
  Eigen::VectorXd theta;
};

struct GspgsResult {
  Eigen::VectorXd best_theta;
  double best_energy = 0.0;
  Eigen::VectorXd final_theta;
  std::vector<GspgsTraceRow> trace;
};

/// theta_{t+1} = theta_t - eta_t * g_t; exactly 2 * n_perturbations objective
/// evaluations per iteration. Best-so-far tracks the evaluated points.
template <class Objective>
GspgsResult gspgs_minimize(Objective &&objective, Eigen::VectorXd theta,
                           const GspgsSchedule &sched, RngStream &rng) {
  GspgsResult result;
  result.best_energy = std::numeric_limits<double>::infinity();
  std::uint64_t evals = 0;

  auto tracked = [&](const Eigen::VectorXd &point, std::uint64_t e) {
    const double f = objective(point, e);
    if (f < result.best_energy) {
      result.best_energy = f;
      result.best_theta = point;
    }
    return f;
  };

  for (int t = 0; t < sched.iterations; ++t) {
    const Eigen::VectorXd grad =
        gspgs_gradient_estimate(tracked, theta, sched.c(t), sched.n_perturbations, rng, evals);
    theta -= sched.eta(t) * grad;
    result.trace.push_back({t, grad.norm(), result.best_energy, theta});
  }
  result.final_theta = theta;
  return result;
}

/// VQE over the angles of a fixed token sequence, with the QSCI subspace
/// energy as the (stochastic) objective. Each evaluation samples with a fresh
/// stream derived from (3, eval_index).
inline GspgsResult gspgs_optimize(const OperatorPool &pool, const std::vector<int> &token_sequence,
                                  const Eigen::VectorXd &theta0, const GspgsSchedule &sched,
                                  const MolecularIntegrals &ints, std::size_t d_max,
                                  std::uint64_t n_shots, RngStream &rng) {
  if (theta0.size() != static_cast<Eigen::Index>(token_sequence.size()))
    throw std::invalid_argument("gspgs_optimize: theta size must match the sequence length");
  for (const int tok : token_sequence)
    if (tok < 0 || tok >= static_cast<int>(pool.size()))
      throw std::invalid_argument("gspgs_optimize: token id out of range");
  const auto hf = hf_determinant(ints);

  auto objective = [&](const Eigen::VectorXd &theta, std::uint64_t eval) {
    Circuit c;
    c.n_qubits = pool.n_qubits;
    c.initial = hf;
    for (std::size_t t = 0; t < token_sequence.size(); ++t) {
      const auto &token = pool.tokens[static_cast<std::size_t>(token_sequence[t])];
      if (token.pauli.weight() == 0) continue;
      c.gates.push_back({token.pauli, theta(static_cast<Eigen::Index>(t))});
    }
    auto stream = rng.child(3, eval);
    return qsci_energy(run_circuit(c), n_shots, d_max, ints, stream).energy;
  };
  return gspgs_minimize(objective, theta0, sched, rng);
}

} // namespace qsci
