/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsci/config.hpp"
#include "qsci/harness.hpp"
#include "qsci/pool.hpp"
#include "qsci/qsci.hpp"
#include "qsci/wavefunction.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string fcidump;
  std::string amps;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::uint64_t> d_max;
  std::optional<std::uint64_t> shots;
  std::optional<int> iters;
  std::optional<int> length;
  std::string method;   // run-baseline
  std::string circuit;  // qsci-once
  std::string record;   // report
};

void add_common_flags(CLI::App *cmd, CliOverrides &opt) {
  cmd->add_option("--config", opt.config_path, "key=value configuration file");
  cmd->add_option("--fcidump", opt.fcidump, "FCIDUMP file with molecular integrals");
  cmd->add_option("--amps", opt.amps, "excitation-amplitude file (default: built-in MP2)");
  cmd->add_option("--seed", opt.seed, "base RNG seed");
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_option("--d-max", opt.d_max, "determinant budget for diagonalization");
  cmd->add_option("--shots", opt.shots, "measurement shots per circuit");
  cmd->add_option("--iters", opt.iters, "optimization iterations");
  cmd->add_option("--length", opt.length, "operator sequence length L");
}

qsci::ExperimentConfig build_config(const CliOverrides &opt) {
  qsci::ExperimentConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + opt.config_path);
    cfg = qsci::parse_config(in);
  }
  if (!opt.fcidump.empty()) cfg.fcidump_path = opt.fcidump;
  if (!opt.amps.empty()) cfg.amplitude_path = opt.amps;
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  if (opt.d_max) cfg.d_max = static_cast<std::size_t>(*opt.d_max);
  if (opt.shots) cfg.n_shots = *opt.shots;
  if (opt.iters) cfg.n_iterations = *opt.iters;
  if (opt.length) cfg.circuit_length = *opt.length;
  return cfg;
}

qsci::MolecularIntegrals load_integrals(const qsci::ExperimentConfig &cfg) {
  if (cfg.fcidump_path.empty()) throw std::runtime_error("--fcidump is required");
  std::ifstream in(cfg.fcidump_path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP: " + cfg.fcidump_path);
  return qsci::parse_fcidump(in);
}

void write_record_and_reports(const qsci::RunRecord &record, const std::string &out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/record.json");
    out << qsci::to_json(record).dump(2) << "\n";
  }
  qsci::emit_reports(record, out_dir);
  std::printf("method=%s best_energy=%.12f error=%.3e reports=%s\n", record.method.c_str(),
              record.best_energy, record.best_energy - record.fci_energy, out_dir.c_str());
}

int cmd_fci(const CliOverrides &opt) {
  auto cfg = build_config(opt);
  const auto ints = load_integrals(cfg);
  qsci::FciOptions opts;
  opts.determinant_cap = cfg.fci_cap;
  opts.dense_cutoff = cfg.dense_cutoff;
  const auto [energy, wf] = qsci::fci_ground_state(ints, opts);
  const auto hf = qsci::hf_determinant(ints);
  std::printf("E_FCI = %.12f Ha\n", energy);
  std::printf("E_HF  = %.12f Ha\n", qsci::slater_condon(hf, hf, ints));
  std::printf("|<HF|FCI>|^2 = %.6f\n", wf.coefficient(hf) * wf.coefficient(hf));
  if (!cfg.out_dir.empty() && cfg.out_dir != ".") {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/fci_wavefunction.csv");
    qsci::write_wavefunction_csv(out, wf);
  }
  return 0;
}

int cmd_pool_build(const CliOverrides &opt) {
  auto cfg = build_config(opt);
  const auto ints = load_integrals(cfg);
  std::vector<qsci::Excitation> amps;
  if (!cfg.amplitude_path.empty()) {
    std::ifstream in(cfg.amplitude_path);
    if (!in) throw std::runtime_error("cannot open amplitude file: " + cfg.amplitude_path);
    amps = qsci::parse_amplitudes(in, ints);
  } else {
    amps = qsci::mp2_amplitudes(ints);
  }
  const auto pool = qsci::build_pool(amps, ints.n_qubits(), cfg.pool_threshold);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/pool.csv";
  std::ofstream out(path);
  qsci::write_pool_csv(out, pool);
  std::printf("pool size=%zu (including identity) -> %s\n", pool.size(), path.c_str());
  return 0;
}

int cmd_qsci_once(const CliOverrides &opt) {
  auto cfg = build_config(opt);
  const auto ints = load_integrals(cfg);
  if (cfg.d_max < 1) throw std::runtime_error("--d-max is required");

  qsci::Circuit circuit;
  if (!opt.circuit.empty()) {
    std::ifstream in(opt.circuit);
    if (!in) throw std::runtime_error("cannot open circuit file: " + opt.circuit);
    circuit = qsci::read_circuit(in, ints.n_qubits());
  } else {
    circuit.n_qubits = ints.n_qubits();
    circuit.initial = qsci::hf_determinant(ints);
  }
  const auto state = qsci::run_circuit(circuit);
  qsci::RngStream rng(cfg.seed);
  const auto wf = qsci::qsci_energy(state, cfg.n_shots, cfg.d_max, ints, rng);
  std::printf("E_QSCI = %.12f Ha (support %zu)\n", wf.energy, wf.support_size());
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir + "/qsci_wavefunction.csv");
  qsci::write_wavefunction_csv(out, wf);
  return 0;
}

int cmd_report(const CliOverrides &opt) {
  if (opt.record.empty()) throw std::runtime_error("--record is required");
  std::ifstream in(opt.record);
  if (!in) throw std::runtime_error("cannot open record: " + opt.record);
  nlohmann::json j;
  in >> j;
  const auto record = qsci::record_from_json(j);
  const std::string out_dir = opt.out.empty() ? "." : opt.out;
  std::filesystem::create_directories(out_dir);
  qsci::emit_reports(record, out_dir);
  std::printf("reports written to %s\n", out_dir.c_str());
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Generative circuit design for determinant-subspace diagonalization"};
  app.require_subcommand(1);
  CliOverrides opt;

  auto *fci = app.add_subcommand("fci", "exact sector ground state of an FCIDUMP");
  add_common_flags(fci, opt);

  auto *pool = app.add_subcommand("pool-build", "build and dump the operator pool");
  add_common_flags(pool, opt);

  auto *once = app.add_subcommand("qsci-once", "one sample -> complete -> truncate -> "
                                               "diagonalize pass over a circuit");
  add_common_flags(once, opt);
  once->add_option("--circuit", opt.circuit, "circuit file (default: bare Hartree-Fock state)");

  auto *gqe = app.add_subcommand("run-gqe", "policy-optimized circuit search");
  add_common_flags(gqe, opt);

  auto *random = app.add_subcommand("run-random", "uniform-random circuit baseline");
  add_common_flags(random, opt);

  auto *baseline = app.add_subcommand("run-baseline", "state-preparation baselines");
  add_common_flags(baseline, opt);
  baseline->add_option("--method", opt.method, "time_evolved | sqdrift | exact")->required();

  auto *report = app.add_subcommand("report", "re-emit CSV reports from a record.json");
  report->add_option("--record", opt.record, "record.json produced by a run")->required();
  report->add_option("--out", opt.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fci->parsed()) return cmd_fci(opt);
    if (pool->parsed()) return cmd_pool_build(opt);
    if (once->parsed()) return cmd_qsci_once(opt);
    if (gqe->parsed()) {
      const auto cfg = build_config(opt);
      write_record_and_reports(qsci::run_gqe(cfg), cfg.out_dir);
      return 0;
    }
    if (random->parsed()) {
      const auto cfg = build_config(opt);
      write_record_and_reports(qsci::run_random_baseline(cfg), cfg.out_dir);
      return 0;
    }
    if (baseline->parsed()) {
      const auto cfg = build_config(opt);
      write_record_and_reports(qsci::run_baseline(cfg, opt.method), cfg.out_dir);
      return 0;
    }
    if (report->parsed()) return cmd_report(opt);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
