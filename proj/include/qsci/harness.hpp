/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "qsci/baselines.hpp"
#include "qsci/circuit.hpp"
#include "qsci/config.hpp"
#include "qsci/fci.hpp"
#include "qsci/grpo.hpp"
#include "qsci/policy.hpp"
#include "qsci/pool.hpp"
#include "qsci/qsci.hpp"
#include "qsci/refine.hpp"

namespace qsci {

constexpr double kChemicalPrecisionHa = 1.5936e-3;

struct IterationRecord {
  int iter = 0;
  std::vector<double> batch_energies;
  double best_so_far = 0.0;
  double e_local = 0.0;
  double e_global = 0.0;
  std::size_t support_local = 0;
  std::size_t support_global = 0;
  std::vector<std::size_t> n_dets; // retained determinants per circuit
  std::vector<GateCost> gate_costs;
  std::uint64_t unique_dets_cumulative = 0;
  double mean_reward = 0.0;
  std::vector<double> update_losses; // one entry per policy update
  double wall_seconds = 0.0;
};

struct RunRecord {
  std::string method;
  double fci_energy = 0.0;
  double hf_energy = 0.0;
  std::size_t pool_size = 0;
  std::uint64_t total_shots = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  std::string best_circuit_text;
  std::vector<IterationRecord> iterations;
  std::map<std::string, std::string> metadata;
};

namespace detail {

struct LoadedSystem {
  MolecularIntegrals ints;
  OperatorPool pool;
  double fci_energy = 0.0;
  double hf_energy = 0.0;
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LoadedSystem load_system(const ExperimentConfig &cfg, bool build_operator_pool = true) {
  LoadedSystem sys{parse_fcidump(read_file(cfg.fcidump_path)), {}, 0.0, 0.0};
  if (build_operator_pool) {
    std::vector<Excitation> amps;
    if (!cfg.amplitude_path.empty()) {
      std::istringstream in(read_file(cfg.amplitude_path));
      amps = parse_amplitudes(in, sys.ints);
    } else {
      amps = mp2_amplitudes(sys.ints);
    }
    sys.pool = build_pool(amps, sys.ints.n_qubits(), cfg.pool_threshold);
  }
  FciOptions fci_opts;
  fci_opts.determinant_cap = cfg.fci_cap;
  fci_opts.dense_cutoff = cfg.dense_cutoff;
  sys.fci_energy = fci_ground_state(sys.ints, fci_opts).first;
  const auto hf = hf_determinant(sys.ints);
  sys.hf_energy = slater_condon(hf, hf, sys.ints);
  return sys;
}

// Decode a sampled vocabulary-id sequence (ids >= 1) into a circuit; identity
// tokens contribute no gate.
inline Circuit decode_circuit(const OperatorPool &pool, const std::vector<int> &vocab_ids,
                              const Determinant &initial) {
  Circuit c;
  c.n_qubits = pool.n_qubits;
  c.initial = initial;
  for (const int id : vocab_ids) {
    const auto &token = pool.tokens[static_cast<std::size_t>(id - 1)];
    if (token.pauli.weight() == 0) continue;
    c.gates.push_back({token.pauli, token.angle});
  }
  return c;
}

struct QsciStages {
  DeterminantSet selected; // in-sector sampled determinants with frequencies
  SampledWavefunction wf;
};

inline QsciStages qsci_evaluate(const Statevector &state, std::uint64_t n_shots, std::size_t d_max,
                                const MolecularIntegrals &ints, RngStream &rng, int dense_cutoff) {
  QsciStages out;
  const auto hist = sample(state, n_shots, rng);
  out.selected = select_determinants(hist, {ints.n_alpha, ints.n_beta});
  if (out.selected.size() == 0)
    throw std::runtime_error("qsci: no sampled determinant lies in the target sector");
  const auto kept = truncate(symmetry_complete(out.selected), d_max);
  out.wf = diagonalize_subspace(kept, ints, dense_cutoff);
  return out;
}

inline void record_common_metadata(RunRecord &record, const ExperimentConfig &cfg) {
  record.metadata["seed"] = std::to_string(cfg.seed);
  record.metadata["m"] = std::to_string(cfg.m_circuits);
  record.metadata["shots_per_circuit"] = std::to_string(cfg.n_shots);
  record.metadata["length"] = std::to_string(cfg.circuit_length);
  record.metadata["d_max"] = std::to_string(cfg.d_max);
  record.metadata["pool_angle_convention"] = "representative_coefficient*amplitude";
  record.metadata["sqdrift_excitation_mapping"] = "one sampled excitation = one qDRIFT gate";
  record.metadata["weight_decay_scope"] = "2-D weight tensors only";
  record.metadata["policy"] = std::to_string(cfg.n_layers) + "x" + std::to_string(cfg.d_model) +
                              "h" + std::to_string(cfg.n_heads) + "ff" + std::to_string(cfg.d_ff);
}

// Shared loop body for the policy-driven and uniform-random searches.
inline RunRecord run_search(const ExperimentConfig &cfg, bool train_policy) {
  cfg.validate();
  const auto sys = load_system(cfg);
  const auto hf = hf_determinant(sys.ints);

  PolicyConfig pcfg;
  pcfg.vocab_size = static_cast<int>(sys.pool.size()) + 1;
  pcfg.context_len = cfg.circuit_length + 1;
  pcfg.d_model = cfg.d_model;
  pcfg.n_heads = cfg.n_heads;
  pcfg.n_layers = cfg.n_layers;
  pcfg.d_ff = cfg.d_ff;
  pcfg.repetition_penalty = cfg.repetition_penalty;
  pcfg.seed = cfg.seed;
  auto params = PolicyParameters::random_init(pcfg);
  AdamState adam;
  long adam_step = 0;

  RngStream root(cfg.seed);
  RunRecord record;
  record.method = train_policy ? "gqe" : "random";
  record.fci_energy = sys.fci_energy;
  record.hf_energy = sys.hf_energy;
  record.pool_size = sys.pool.size();
  record_common_metadata(record, cfg);

  RefinementState refinement;
  std::unordered_set<Determinant, DeterminantHash> unique_dets;
  double best = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.n_iterations; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      IterationRecord row;
      row.iter = iter;

      SampledBatch batch;
      if (train_policy) {
        auto seq_stream = root.child(4, static_cast<std::uint64_t>(iter));
        batch = sample_sequences(params, cfg.m_circuits, cfg.circuit_length,
                                 cfg.repetition_penalty, seq_stream);
      } else {
        auto seq_stream = root.child(4, static_cast<std::uint64_t>(iter));
        batch.m_count = cfg.m_circuits;
        batch.length = cfg.circuit_length;
        batch.tokens.resize(static_cast<std::size_t>(cfg.m_circuits));
        for (auto &seq : batch.tokens)
          for (int t = 0; t < cfg.circuit_length; ++t)
            seq.push_back(1 + static_cast<int>(seq_stream.uniform_int(sys.pool.size())));
      }

      std::vector<SampledWavefunction> wavefunctions;
      batch.rewards.resize(static_cast<std::size_t>(cfg.m_circuits));
      for (int m = 0; m < cfg.m_circuits; ++m) {
        const auto circuit = decode_circuit(sys.pool, batch.tokens[static_cast<std::size_t>(m)], hf);
        const auto state = run_circuit(circuit);
        auto stream = root.child(5, static_cast<std::uint64_t>(iter)).child(static_cast<std::uint64_t>(m));
        auto stages = qsci_evaluate(state, cfg.n_shots, cfg.d_max, sys.ints, stream, cfg.dense_cutoff);
        const double energy = stages.wf.energy;

        row.batch_energies.push_back(energy);
        row.n_dets.push_back(stages.wf.support_size());
        row.gate_costs.push_back(gate_cost(circuit));
        for (const auto &[d, w] : stages.selected.entries) unique_dets.insert(d);
        batch.rewards[static_cast<std::size_t>(m)] = -energy;
        record.total_shots += cfg.n_shots;

        if (energy < best) {
          best = energy;
          std::ostringstream circ;
          write_circuit(circ, circuit);
          record.best_circuit_text = circ.str();
          record.best_energy = energy;
        }
        wavefunctions.push_back(std::move(stages.wf));
      }
      row.best_so_far = best;
      row.unique_dets_cumulative = unique_dets.size();
      double mean_reward = 0.0;
      for (const double r : batch.rewards) mean_reward += r;
      row.mean_reward = mean_reward / cfg.m_circuits;

      if (train_policy) {
        batch.advantages = compute_advantages(batch.rewards, cfg.grpo.sigma_floor);
        bool degenerate = true;
        for (const double a : batch.advantages)
          if (a != 0.0) degenerate = false;
        if (!degenerate) {
          for (int update = 0; update < cfg.grpo.updates_per_batch; ++update) {
            const auto [loss, grad] = grpo_loss_and_grad(params, batch, cfg.grpo);
            adamw_step(params, grad, ++adam_step, cfg.grpo, adam);
            row.update_losses.push_back(loss);
          }
        }
      }

      const auto local = local_refine(wavefunctions, cfg.d_max, sys.ints);
      refinement = global_refine(std::move(refinement), local, cfg.d_max, sys.ints);
      row.e_local = local.energy;
      row.e_global = refinement.global.energy;
      row.support_local = local.support_size();
      row.support_global = refinement.global.support_size();

      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      record.iterations.push_back(std::move(row));
    } catch (const std::exception &e) {
      throw std::runtime_error("iteration " + std::to_string(iter) + ": " + e.what());
    }
  }
  return record;
}

} // namespace detail

/// Full policy-driven search: N_iter iterations of sample M sequences ->
/// decode -> simulate -> QSCI evaluation -> rewards r = -E -> advantages ->
/// policy updates on the frozen batch -> local and global refinement.
inline RunRecord run_gqe(const ExperimentConfig &cfg) { return detail::run_search(cfg, true); }

/// Same loop with uniform token draws and no policy updates.
inline RunRecord run_random_baseline(const ExperimentConfig &cfg) {
  return detail::run_search(cfg, false);
}

/// State-preparation baselines at the search's total shot budget
/// (M * N_shot * N_iter), recorded as a single-iteration run.
inline RunRecord run_baseline(const ExperimentConfig &cfg, const std::string &which) {
  cfg.validate();
  const bool needs_pool = false;
  const auto sys = detail::load_system(cfg, needs_pool);
  const std::uint64_t budget = static_cast<std::uint64_t>(cfg.m_circuits) * cfg.n_shots *
                               static_cast<std::uint64_t>(cfg.n_iterations);
  RngStream root(cfg.seed);

  RunRecord record;
  record.method = which;
  record.fci_energy = sys.fci_energy;
  record.hf_energy = sys.hf_energy;
  detail::record_common_metadata(record, cfg);
  record.total_shots = budget;

  IterationRecord row;
  row.iter = 0;
  SampledWavefunction wf;
  if (which == "time_evolved") {
    const auto te_cfg = cfg.baseline_mode == "multiple"
                            ? TimeEvolvedConfig::multiple(budget)
                            : TimeEvolvedConfig::single(cfg.delta_t, budget);
    wf = time_evolved_qsci(te_cfg, sys.ints, cfg.d_max, root);
    const auto h = jordan_wigner(sys.ints);
    const auto hf = hf_determinant(sys.ints);
    for (const int k : te_cfg.k_list)
      row.gate_costs.push_back(
          gate_cost(trotter_circuit(h, k * te_cfg.delta_t, te_cfg.trotter_steps, hf)));
    record.metadata["baseline_param"] = "delta_t=" + std::to_string(te_cfg.delta_t);
  } else if (which == "sqdrift") {
    SqDriftConfig sq;
    sq.n_excitations = cfg.sqdrift_excitations;
    sq.randomizations = cfg.sqdrift_randomizations;
    sq.k_list = cfg.sqdrift_k_list;
    sq.n_shots = budget;
    wf = sqdrift_qsci(sq, sys.ints, cfg.d_max, root);
    const auto h = jordan_wigner(sys.ints);
    auto draw_stream = root.child(1, 0);
    row.gate_costs.push_back(gate_cost(
        qdrift_circuit(h, 1.0, sq.n_excitations, hf_determinant(sys.ints), draw_stream)));
    record.metadata["baseline_param"] = "excitations=" + std::to_string(sq.n_excitations);
  } else if (which == "exact") {
    FciOptions opts;
    opts.determinant_cap = cfg.fci_cap;
    opts.dense_cutoff = cfg.dense_cutoff;
    wf = exact_state_qsci(sys.ints, budget, cfg.d_max, root, opts);
    row.gate_costs.push_back(GateCost{});
    record.metadata["baseline_param"] = "-";
  } else {
    throw std::invalid_argument("run_baseline: unknown method '" + which + "'");
  }

  row.batch_energies.push_back(wf.energy);
  row.best_so_far = wf.energy;
  row.e_local = wf.energy;
  row.e_global = wf.energy;
  row.support_local = wf.support_size();
  row.support_global = wf.support_size();
  row.n_dets.push_back(wf.support_size());
  row.unique_dets_cumulative = wf.support_size();
  row.mean_reward = -wf.energy;
  record.best_energy = wf.energy;
  record.iterations.push_back(std::move(row));
  return record;
}

// ===================== record serialization and reports =====================

inline nlohmann::json to_json(const RunRecord &record) {
  nlohmann::json j;
  j["method"] = record.method;
  j["fci_energy"] = record.fci_energy;
  j["hf_energy"] = record.hf_energy;
  j["pool_size"] = record.pool_size;
  j["total_shots"] = record.total_shots;
  j["best_energy"] = record.best_energy;
  j["best_circuit"] = record.best_circuit_text;
  j["metadata"] = record.metadata;
  j["iterations"] = nlohmann::json::array();
  for (const auto &row : record.iterations) {
    nlohmann::json r;
    r["iter"] = row.iter;
    r["batch_energies"] = row.batch_energies;
    r["best_so_far"] = row.best_so_far;
    r["e_local"] = row.e_local;
    r["e_global"] = row.e_global;
    r["support_local"] = row.support_local;
    r["support_global"] = row.support_global;
    r["n_dets"] = row.n_dets;
    nlohmann::json costs = nlohmann::json::array();
    for (const auto &c : row.gate_costs)
      costs.push_back({{"two_qubit", c.two_qubit_gates},
                       {"rotation", c.rotation_gates},
                       {"total", c.total_gates}});
    r["gate_costs"] = costs;
    r["unique_dets_cumulative"] = row.unique_dets_cumulative;
    r["mean_reward"] = row.mean_reward;
    r["update_losses"] = row.update_losses;
    r["wall_seconds"] = row.wall_seconds;
    j["iterations"].push_back(std::move(r));
  }
  return j;
}

inline RunRecord record_from_json(const nlohmann::json &j) {
  RunRecord record;
  record.method = j.at("method").get<std::string>();
  record.fci_energy = j.at("fci_energy").get<double>();
  record.hf_energy = j.at("hf_energy").get<double>();
  record.pool_size = j.at("pool_size").get<std::size_t>();
  record.total_shots = j.at("total_shots").get<std::uint64_t>();
  record.best_energy = j.at("best_energy").get<double>();
  record.best_circuit_text = j.at("best_circuit").get<std::string>();
  record.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  for (const auto &r : j.at("iterations")) {
    IterationRecord row;
    row.iter = r.at("iter").get<int>();
    row.batch_energies = r.at("batch_energies").get<std::vector<double>>();
    row.best_so_far = r.at("best_so_far").get<double>();
    row.e_local = r.at("e_local").get<double>();
    row.e_global = r.at("e_global").get<double>();
    row.support_local = r.at("support_local").get<std::size_t>();
    row.support_global = r.at("support_global").get<std::size_t>();
    row.n_dets = r.at("n_dets").get<std::vector<std::size_t>>();
    for (const auto &c : r.at("gate_costs"))
      row.gate_costs.push_back(GateCost{c.at("two_qubit").get<long>(),
                                        c.at("rotation").get<long>(),
                                        c.at("total").get<long>()});
    row.unique_dets_cumulative = r.at("unique_dets_cumulative").get<std::uint64_t>();
    row.mean_reward = r.at("mean_reward").get<double>();
    row.update_losses = r.at("update_losses").get<std::vector<double>>();
    row.wall_seconds = r.at("wall_seconds").get<double>();
    record.iterations.push_back(std::move(row));
  }
  return record;
}

namespace detail {

inline std::ofstream open_report(const std::string &out_dir, const std::string &name) {
  const std::string path = out_dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out.precision(17);
  return out;
}

} // namespace detail

/// Emit the CSV reports for a run into `out_dir`: optimization history,
/// sampling efficiency, gate efficiency, wavefunction compactness, the
/// refinement trace, the per-update training log, and (for baseline methods)
/// a one-line summary. Energy errors are taken against the run's own exact
/// reference; the chemical-precision constant is included as a column.
inline void emit_reports(const RunRecord &record, const std::string &out_dir) {
  const double e_ref = record.fci_energy;

  {
    auto out = detail::open_report(out_dir, "optimization_history.csv");
    out << "iter,best_energy,best_error,e_local,local_error,e_global,global_error,"
           "chemical_precision\n";
    for (const auto &row : record.iterations)
      out << row.iter << "," << row.best_so_far << "," << row.best_so_far - e_ref << ","
          << row.e_local << "," << row.e_local - e_ref << "," << row.e_global << ","
          << row.e_global - e_ref << "," << kChemicalPrecisionHa << "\n";
  }
  {
    auto out = detail::open_report(out_dir, "sampling_efficiency.csv");
    out << "iter,cumulative_shots,best_error,global_error,unique_determinants,"
           "chemical_precision\n";
    std::uint64_t total_evals = 0;
    for (const auto &row : record.iterations) total_evals += row.batch_energies.size();
    const std::uint64_t per_eval = record.total_shots / std::max<std::uint64_t>(1, total_evals);
    std::uint64_t shots = 0;
    for (const auto &row : record.iterations) {
      shots += static_cast<std::uint64_t>(row.batch_energies.size()) * per_eval;
      out << row.iter << "," << shots << "," << row.best_so_far - e_ref << ","
          << row.e_global - e_ref << "," << row.unique_dets_cumulative << ","
          << kChemicalPrecisionHa << "\n";
    }
  }
  {
    auto out = detail::open_report(out_dir, "gate_efficiency.csv");
    out << "iter,two_qubit_gates,rotation_gates,total_gates,best_error,global_error,"
           "chemical_precision\n";
    long max_2q = 0, max_rot = 0, max_total = 0;
    for (const auto &row : record.iterations) {
      for (const auto &c : row.gate_costs) {
        max_2q = std::max(max_2q, c.two_qubit_gates);
        max_rot = std::max(max_rot, c.rotation_gates);
        max_total = std::max(max_total, c.total_gates);
      }
      out << row.iter << "," << max_2q << "," << max_rot << "," << max_total << ","
          << row.best_so_far - e_ref << "," << row.e_global - e_ref << ","
          << kChemicalPrecisionHa << "\n";
    }
  }
  {
    auto out = detail::open_report(out_dir, "compactness.csv");
    out << "iter,n_determinants,global_error,chemical_precision\n";
    for (const auto &row : record.iterations)
      out << row.iter << "," << row.support_global << "," << row.e_global - e_ref << ","
          << kChemicalPrecisionHa << "\n";
  }
  {
    auto out = detail::open_report(out_dir, "refinement_trace.csv");
    out << "iter,E_local,E_global,support_local,support_global\n";
    for (const auto &row : record.iterations)
      out << row.iter << "," << row.e_local << "," << row.e_global << "," << row.support_local
          << "," << row.support_global << "\n";
  }
  {
    auto out = detail::open_report(out_dir, "training_log.csv");
    out << "iter,update,loss,mean_reward,best_energy\n";
    for (const auto &row : record.iterations)
      for (std::size_t u = 0; u < row.update_losses.size(); ++u)
        out << row.iter << "," << u << "," << row.update_losses[u] << "," << row.mean_reward
            << "," << row.best_so_far << "\n";
  }
  if (record.method != "gqe" && record.method != "random") {
    auto out = detail::open_report(out_dir, "baseline_summary.csv");
    out << "method,param,shots,gate_2q,gate_rot,gate_total,n_dets,energy,error\n";
    const auto &row = record.iterations.front();
    GateCost cost;
    for (const auto &c : row.gate_costs) cost += c;
    const auto param = record.metadata.count("baseline_param")
                           ? record.metadata.at("baseline_param")
                           : std::string("-");
    out << record.method << "," << param << "," << record.total_shots << ","
        << cost.two_qubit_gates << "," << cost.rotation_gates << "," << cost.total_gates << ","
        << row.n_dets.front() << "," << record.best_energy << ","
        << record.best_energy - e_ref << "\n";
  }
}

} // namespace qsci
