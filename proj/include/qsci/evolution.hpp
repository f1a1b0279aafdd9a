/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsci/circuit.hpp"
#include "qsci/pauli.hpp"
#include "qsci/rng.hpp"

namespace qsci {

namespace detail {

// Non-identity terms in deterministic Trotter order: descending |coefficient|,
// ties by canonical string order.
inline std::vector<std::pair<double, PauliString>> trotter_ordered_terms(const PauliHamiltonian &h) {
  std::vector<std::pair<double, PauliString>> terms;
  for (const auto &t : h.terms)
    if (t.second.weight() > 0) terms.push_back(t);
  std::sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
    if (std::abs(a.first) != std::abs(b.first)) return std::abs(a.first) > std::abs(b.first);
    return a.second.canonical_less(b.second);
  });
  return terms;
}

} // namespace detail

/// First-order Trotter circuit for exp(-i H t): `steps` repetitions of one
/// rotation exp(-i c_j (t/steps) P_j) per non-identity term. The identity term
/// only contributes a global phase and is skipped. t = 0 gives an empty
/// circuit.
inline Circuit trotter_circuit(const PauliHamiltonian &h, double t, int steps,
                               const Determinant &initial) {
  if (steps < 1) throw std::invalid_argument("trotter_circuit: steps must be >= 1");
  Circuit c;
  c.n_qubits = h.n_qubits;
  c.initial = initial;
  if (t == 0.0) return c;
  const auto terms = detail::trotter_ordered_terms(h);
  c.gates.reserve(terms.size() * static_cast<std::size_t>(steps));
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s)
    for (const auto &[coeff, pauli] : terms) c.gates.push_back({pauli, -coeff * dt});
  return c;
}

/// One randomized qDRIFT circuit for exp(-i H t): n_samples gates, each Pauli
/// drawn with probability |c_j| / lambda, every angle -sign(c_j) * lambda * t
/// / n_samples, lambda = sum_j |c_j| over non-identity terms.
inline Circuit qdrift_circuit(const PauliHamiltonian &h, double t, int n_samples,
                              const Determinant &initial, RngStream &rng) {
  if (n_samples < 1) throw std::invalid_argument("qdrift_circuit: n_samples must be >= 1");
  const auto terms = detail::trotter_ordered_terms(h);
  if (terms.empty()) throw std::invalid_argument("qdrift_circuit: all-identity Hamiltonian");

  double lambda = 0.0;
  std::vector<double> cdf(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    lambda += std::abs(terms[j].first);
    cdf[j] = lambda;
  }

  Circuit c;
  c.n_qubits = h.n_qubits;
  c.initial = initial;
  c.gates.reserve(static_cast<std::size_t>(n_samples));
  const double tau = lambda * t / n_samples;
  for (int g = 0; g < n_samples; ++g) {
    const double u = rng.uniform() * lambda;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t j = it == cdf.end() ? terms.size() - 1
                                          : static_cast<std::size_t>(it - cdf.begin());
    const double sign = terms[j].first < 0.0 ? -1.0 : 1.0;
    c.gates.push_back({terms[j].second, -sign * tau});
  }
  return c;
}

} // namespace qsci
