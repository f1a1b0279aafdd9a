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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsci {

/// Pauli string over n qubits, encoded as X/Z bitmasks (Y = both bits set).
///
/// The letter on qubit q is I, X, Y, or Z; the canonical textual form is one
/// letter per qubit with qubit 0 rightmost, e.g. "IXYZ" puts Z on qubit 0.
/// Strings carry no phase; coefficients live with the owning term.
class PauliString {
public:
  PauliString() = default;
  explicit PauliString(int n_qubits) : n_qubits_(n_qubits) { check_width(n_qubits); }
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
      : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
    check_width(n_qubits);
  }

  /// Parse the canonical textual form (qubit 0 rightmost).
  static PauliString from_string(const std::string &text) {
    PauliString p(static_cast<int>(text.size()));
    for (int q = 0; q < p.n_qubits_; ++q)
      p.set_letter(q, text[text.size() - 1 - q]);
    return p;
  }

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  /// Number of non-identity letters.
  int weight() const { return std::popcount(x_ | z_); }

  char letter(int q) const {
    const bool x = (x_ >> q) & 1ULL, z = (z_ >> q) & 1ULL;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  void set_letter(int q, char c) {
    const std::uint64_t bit = 1ULL << q;
    x_ &= ~bit;
    z_ &= ~bit;
    switch (c) {
    case 'I': break;
    case 'X': x_ |= bit; break;
    case 'Y': x_ |= bit; z_ |= bit; break;
    case 'Z': z_ |= bit; break;
    default: throw std::invalid_argument("invalid Pauli letter");
    }
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n_qubits_), 'I');
    for (int q = 0; q < n_qubits_; ++q)
      s[static_cast<std::size_t>(n_qubits_ - 1 - q)] = letter(q);
    return s;
  }

  bool operator==(const PauliString &o) const {
    return n_qubits_ == o.n_qubits_ && x_ == o.x_ && z_ == o.z_;
  }

  /// Canonical string order: lexicographic on the textual form, I < X < Y < Z.
  bool canonical_less(const PauliString &o) const {
    for (int q = std::max(n_qubits_, o.n_qubits_) - 1; q >= 0; --q) {
      const char a = q < n_qubits_ ? letter(q) : 'I';
      const char b = q < o.n_qubits_ ? letter(q) : 'I';
      if (a != b) return a < b;
    }
    return false;
  }

private:
  static void check_width(int n) {
    if (n < 0 || n > 64) throw std::invalid_argument("PauliString supports 0..64 qubits");
  }

  int n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Action on a computational basis state: P |ket> = phase * |ket ^ x_mask>.
/// Returns the phase; the flipped bitstring is ket ^ P.x_mask().
inline std::complex<double> pauli_phase_on_basis(const PauliString &p, std::uint64_t ket) {
  static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int n_y = std::popcount(p.x_mask() & p.z_mask());
  const int minus = std::popcount(ket & p.z_mask());
  std::complex<double> phase = kIPow[n_y & 3];
  return (minus & 1) ? -phase : phase;
}

/// <bra| P |ket> on computational basis states.
inline std::complex<double> pauli_bra_ket(const PauliString &p, std::uint64_t bra,
                                          std::uint64_t ket) {
  if (bra != (ket ^ p.x_mask())) return {0.0, 0.0};
  return pauli_phase_on_basis(p, ket);
}

/// Real-coefficient Pauli-string sum, the qubit form of the molecular
/// Hamiltonian. Terms are unique, sorted canonically; the identity (if any)
/// carries the scalar offset.
struct PauliHamiltonian {
  int n_qubits = 0;
  std::vector<std::pair<double, PauliString>> terms;

  double identity_coefficient() const {
    for (const auto &[c, p] : terms)
      if (p.weight() == 0) return c;
    return 0.0;
  }

  /// <bra| H |ket> over computational basis states (sum over all terms).
  std::complex<double> bra_ket(std::uint64_t bra, std::uint64_t ket) const {
    const std::uint64_t diff = bra ^ ket;
    std::complex<double> acc{0.0, 0.0};
    for (const auto &[c, p] : terms)
      if (p.x_mask() == diff) acc += c * pauli_phase_on_basis(p, ket);
    return acc;
  }
};

namespace detail {

/// Weighted Pauli string used while assembling operator algebra products.
struct WeightedPauli {
  std::complex<double> coeff;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
};

/// Single-qubit product phase table, i^k with letters indexed x + 2z
/// (I=0, X=1, Z=2, Y=3).
inline int pauli_mul_phase_exp(int a, int b) {
  static constexpr int table[4][4] = {
      {0, 0, 0, 0},  // I * .
      {0, 0, 3, 1},  // X * {I,X,Z,Y}
      {0, 1, 0, 3},  // Z * {I,X,Z,Y}
      {0, 3, 1, 0},  // Y * {I,X,Z,Y}
  };
  return table[a][b];
}

inline WeightedPauli mul(const WeightedPauli &lhs, const WeightedPauli &rhs) {
  static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int exp = 0;
  std::uint64_t both = (lhs.x | lhs.z) & (rhs.x | rhs.z);
  while (both) {
    const int q = std::countr_zero(both);
    both &= both - 1;
    const int a = static_cast<int>((lhs.x >> q) & 1ULL) + 2 * static_cast<int>((lhs.z >> q) & 1ULL);
    const int b = static_cast<int>((rhs.x >> q) & 1ULL) + 2 * static_cast<int>((rhs.z >> q) & 1ULL);
    exp += pauli_mul_phase_exp(a, b);
  }
  return {lhs.coeff * rhs.coeff * kIPow[exp & 3], lhs.x ^ rhs.x, lhs.z ^ rhs.z};
}

} // namespace detail
} // namespace qsci
