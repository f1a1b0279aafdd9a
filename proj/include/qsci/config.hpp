/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsci/grpo.hpp"

namespace qsci {

/// Flat key=value experiment configuration. CLI flags override file values.
struct ExperimentConfig {
  std::string fcidump_path;
  std::string amplitude_path; // empty -> built-in MP2 fallback
  int m_circuits = 10;
  std::uint64_t n_shots = 100000;
  int n_iterations = 100;
  int circuit_length = 10;
  std::size_t d_max = 0; // must be set >= 1
  double pool_threshold = 1e-6;

  int d_model = 128;
  int n_heads = 4;
  int n_layers = 4;
  int d_ff = 512;
  double repetition_penalty = 1.2;

  GrpoConfig grpo;

  std::string baseline_mode = "single"; // single | multiple (time-evolved)
  double delta_t = 0.8;
  int trotter_steps = 1;
  int sqdrift_excitations = 100;
  int sqdrift_randomizations = 500;
  std::vector<int> sqdrift_k_list{1, 2, 3};

  std::uint64_t fci_cap = 1000000;
  int dense_cutoff = 2000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  void validate() const {
    if (fcidump_path.empty()) throw std::invalid_argument("config: fcidump path is required");
    if (m_circuits < 2) throw std::invalid_argument("config: m must be >= 2");
    if (circuit_length < 1) throw std::invalid_argument("config: length must be >= 1");
    if (d_max < 1) throw std::invalid_argument("config: d_max must be >= 1");
    if (n_iterations < 1) throw std::invalid_argument("config: iters must be >= 1");
    if (baseline_mode != "single" && baseline_mode != "multiple")
      throw std::invalid_argument("config: baseline.mode must be single or multiple");
    grpo.validate();
  }

  /// Apply one key=value pair; unknown keys are an error.
  void set(const std::string &key, const std::string &value) {
    auto as_int = [&]() { return std::stoll(value); };
    auto as_u64 = [&]() { return std::stoull(value); };
    auto as_double = [&]() { return std::stod(value); };
    try {
      if (key == "fcidump") fcidump_path = value;
      else if (key == "amps") amplitude_path = value;
      else if (key == "m") m_circuits = static_cast<int>(as_int());
      else if (key == "shots") n_shots = as_u64();
      else if (key == "iters") n_iterations = static_cast<int>(as_int());
      else if (key == "length") circuit_length = static_cast<int>(as_int());
      else if (key == "d_max") d_max = static_cast<std::size_t>(as_u64());
      else if (key == "pool_threshold") pool_threshold = as_double();
      else if (key == "policy.d_model") d_model = static_cast<int>(as_int());
      else if (key == "policy.n_heads") n_heads = static_cast<int>(as_int());
      else if (key == "policy.n_layers") n_layers = static_cast<int>(as_int());
      else if (key == "policy.d_ff") d_ff = static_cast<int>(as_int());
      else if (key == "policy.repetition_penalty") repetition_penalty = as_double();
      else if (key == "grpo.clip") grpo.clip = as_double();
      else if (key == "grpo.updates") grpo.updates_per_batch = static_cast<int>(as_int());
      else if (key == "grpo.lr") grpo.learning_rate = as_double();
      else if (key == "grpo.weight_decay") grpo.weight_decay = as_double();
      else if (key == "grpo.sigma_floor") grpo.sigma_floor = as_double();
      else if (key == "baseline.mode") baseline_mode = value;
      else if (key == "baseline.delta_t") delta_t = as_double();
      else if (key == "baseline.trotter_steps") trotter_steps = static_cast<int>(as_int());
      else if (key == "baseline.excitations") sqdrift_excitations = static_cast<int>(as_int());
      else if (key == "baseline.randomizations") sqdrift_randomizations = static_cast<int>(as_int());
      else if (key == "baseline.k_list") {
        sqdrift_k_list.clear();
        std::istringstream ks(value);
        std::string tok;
        while (std::getline(ks, tok, ',')) sqdrift_k_list.push_back(std::stoi(tok));
        if (sqdrift_k_list.empty()) throw std::invalid_argument("empty k_list");
      } else if (key == "fci_cap") fci_cap = as_u64();
      else if (key == "dense_cutoff") dense_cutoff = static_cast<int>(as_int());
      else if (key == "seed") seed = as_u64();
      else if (key == "out") out_dir = value;
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument &) {
      throw;
    } catch (const std::exception &) {
      throw std::invalid_argument("config: bad value for key '" + key + "': " + value);
    }
  }
};

/// Parse `key = value` lines; `#` starts a comment, blank lines are ignored.
inline ExperimentConfig parse_config(std::istream &in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

} // namespace qsci
