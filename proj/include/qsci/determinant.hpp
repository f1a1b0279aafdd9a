/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>

namespace qsci {

/// Slater determinant as occupation bitmasks over spatial orbitals.
///
/// Bit p of `alpha`/`beta` marks spatial orbital p as occupied by a spin-up /
/// spin-down electron. The qubit (and spin-orbital) map is interleaved:
/// qubit 2p carries the alpha occupation of orbital p, qubit 2p+1 the beta
/// occupation. Canonical ordering is ascending (alpha, beta).
struct Determinant {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;

  auto operator<=>(const Determinant &) const = default;

  int n_alpha() const { return std::popcount(alpha); }
  int n_beta() const { return std::popcount(beta); }

  /// Combined occupation over spin orbitals, spin orbital s = 2p + sigma
  /// (sigma: 0 = alpha, 1 = beta). Identical to the qubit basis index.
  std::uint64_t spin_orbital_bits() const {
    std::uint64_t bits = 0;
    std::uint64_t a = alpha, b = beta;
    for (int p = 0; a | b; ++p) {
      bits |= (a & 1ULL) << (2 * p);
      bits |= (b & 1ULL) << (2 * p + 1);
      a >>= 1;
      b >>= 1;
    }
    return bits;
  }

  static Determinant from_spin_orbital_bits(std::uint64_t bits) {
    Determinant d;
    for (int p = 0; bits; ++p) {
      d.alpha |= (bits & 1ULL) << p;
      d.beta |= ((bits >> 1) & 1ULL) << p;
      bits >>= 2;
    }
    return d;
  }

  /// Hex rendering "alpha_hex beta_hex" used by circuit and wavefunction files.
  std::string to_hex() const;
};

struct DeterminantHash {
  std::size_t operator()(const Determinant &d) const {
    std::uint64_t h = d.alpha * 0x9e3779b97f4a7c15ULL;
    h ^= d.beta + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline std::string Determinant::to_hex() const {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%llx %llx",
                static_cast<unsigned long long>(alpha),
                static_cast<unsigned long long>(beta));
  return buf;
}

} // namespace qsci
