/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/pauli.hpp"
#include "qsci/statevector.hpp"

namespace qsci {

/// One Pauli rotation exp(i * angle * pauli).
struct Gate {
  PauliString pauli;
  double angle = 0.0;
};

/// Ordered gate list applied to an initial determinant's basis state.
struct Circuit {
  int n_qubits = 0;
  Determinant initial;
  std::vector<Gate> gates;
};

/// Gate-count accounting under the standard decomposition of a weight-w Pauli
/// rotation into a CX ladder, one arbitrary-angle rotation, and single-qubit
/// basis-change Cliffords (two per X letter, two per Y letter). Identity
/// tokens cost nothing; counting assumes all-to-all connectivity.
struct GateCost {
  long two_qubit_gates = 0;
  long rotation_gates = 0;
  long total_gates = 0;

  GateCost &operator+=(const GateCost &o) {
    two_qubit_gates += o.two_qubit_gates;
    rotation_gates += o.rotation_gates;
    total_gates += o.total_gates;
    return *this;
  }
};

inline GateCost gate_cost(const Circuit &c) {
  GateCost cost;
  for (const auto &g : c.gates) {
    const int w = g.pauli.weight();
    if (w == 0) continue;
    const int n_x = std::popcount(g.pauli.x_mask() & ~g.pauli.z_mask());
    const int n_y = std::popcount(g.pauli.x_mask() & g.pauli.z_mask());
    cost.two_qubit_gates += 2 * (w - 1);
    cost.rotation_gates += 1;
    cost.total_gates += 2 * (w - 1) + 1 + 2 * n_x + 2 * n_y;
  }
  return cost;
}

/// Run the circuit: gates applied in list order to |initial>.
inline Statevector run_circuit(const Circuit &c) {
  Statevector state = Statevector::basis_state(c.n_qubits, c.initial.spin_orbital_bits());
  for (const auto &g : c.gates) apply_pauli_rotation(state, g.pauli, g.angle);
  return state;
}

/// Text form: line 1 `alpha_hex beta_hex`, then one `PAULI angle` line per gate.
inline void write_circuit(std::ostream &out, const Circuit &c) {
  out << c.initial.to_hex() << "\n";
  char buf[64];
  for (const auto &g : c.gates) {
    std::snprintf(buf, sizeof(buf), "%.17g", g.angle);
    out << g.pauli.to_string() << " " << buf << "\n";
  }
}

inline Circuit read_circuit(std::istream &in, int n_qubits) {
  Circuit c;
  c.n_qubits = n_qubits;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("circuit file: missing header line");
  {
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) throw std::runtime_error("circuit file: malformed header: " + line);
    c.initial.alpha = std::stoull(a, nullptr, 16);
    c.initial.beta = std::stoull(b, nullptr, 16);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string pauli;
    double angle;
    if (!(ls >> pauli >> angle)) throw std::runtime_error("circuit file: malformed gate: " + line);
    if (static_cast<int>(pauli.size()) != n_qubits)
      throw std::runtime_error("circuit file: gate width mismatch: " + line);
    c.gates.push_back({PauliString::from_string(pauli), angle});
  }
  return c;
}

} // namespace qsci
