/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qsci/pauli.hpp"
#include "qsci/rng.hpp"

namespace qsci {

/// Dense complex amplitudes over the computational basis, qubit q = bit q.
class Statevector {
public:
  Statevector() = default;
  explicit Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 28)
      throw std::invalid_argument("Statevector supports 1..28 qubits");
    amp_.assign(1ULL << n_qubits, {0.0, 0.0});
  }

  static Statevector basis_state(int n_qubits, std::uint64_t index) {
    Statevector s(n_qubits);
    if (index >= s.amp_.size()) throw std::invalid_argument("basis index out of range");
    s.amp_[index] = {1.0, 0.0};
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return amp_.size(); }
  std::complex<double> &operator[](std::uint64_t i) { return amp_[i]; }
  const std::complex<double> &operator[](std::uint64_t i) const { return amp_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto &a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  std::complex<double> inner(const Statevector &other) const {
    std::complex<double> s{0.0, 0.0};
    for (std::uint64_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
  }

private:
  int n_qubits_ = 0;
  std::vector<std::complex<double>> amp_;
};

/// In-place exp(i*theta*P) |state>, using that P is an involution:
/// exp(i t P) = cos(t) I + i sin(t) P.
inline void apply_pauli_rotation(Statevector &state, const PauliString &p, double theta) {
  if (p.n_qubits() != state.n_qubits())
    throw std::invalid_argument("apply_pauli_rotation: qubit count mismatch");
  if (!std::isfinite(theta)) throw std::invalid_argument("apply_pauli_rotation: non-finite angle");
  const double c = std::cos(theta), s = std::sin(theta);
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> is = std::complex<double>(0.0, s) * kIPow[std::popcount(x & z) & 3];

  if (x == 0) {
    // Diagonal string: per-basis phase exp(+-i theta).
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
      const bool minus = std::popcount(b & z) & 1;
      state[b] *= minus ? std::complex<double>(c, -s) : std::complex<double>(c, s);
    }
    return;
  }

  const int pivot = 63 - std::countl_zero(x);
  const std::uint64_t pivot_bit = 1ULL << pivot;
  for (std::uint64_t b = 0; b < state.dim(); ++b) {
    if (b & pivot_bit) continue;
    const std::uint64_t q = b ^ x;
    const std::complex<double> ab = state[b], aq = state[q];
    const double sign_b = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    const double sign_q = (std::popcount(q & z) & 1) ? -1.0 : 1.0;
    state[b] = c * ab + is * sign_q * aq;
    state[q] = c * aq + is * sign_b * ab;
  }
}

/// Histogram of computational-basis measurement outcomes.
struct ShotHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n_shots = 0;

  void merge(const ShotHistogram &other) {
    for (const auto &[k, c] : other.counts) counts[k] += c;
    n_shots += other.n_shots;
  }
};

/// Multinomial sampling from |amplitudes|^2. Deterministic for a fixed stream.
inline ShotHistogram sample(const Statevector &state, std::uint64_t n_shots, RngStream &rng) {
  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    acc += std::norm(state[i]);
    cdf[i] = acc;
  }
  if (acc <= 0.0) throw std::invalid_argument("sample: zero-norm state");

  ShotHistogram hist;
  hist.n_shots = n_shots;
  for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::uint64_t outcome =
        it == cdf.end() ? state.dim() - 1 : static_cast<std::uint64_t>(it - cdf.begin());
    ++hist.counts[outcome];
  }
  return hist;
}

} // namespace qsci
