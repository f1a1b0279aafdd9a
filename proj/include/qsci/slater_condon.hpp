/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"

namespace qsci {

namespace detail {

// Fermion phase for acting with a ladder operator on spin orbital s:
// (-1)^(number of occupied spin orbitals below s). Matches the convention
// that a determinant is the ascending-index ordered product of creation
// operators on the vacuum.
inline int ladder_parity(std::uint64_t occ, int s) {
  const std::uint64_t below = s == 0 ? 0ULL : (occ & ((1ULL << s) - 1));
  return (std::popcount(below) & 1) ? -1 : 1;
}

// Spin-orbital integral accessors on the interleaved map s = 2p + sigma.
inline double h1_so(const MolecularIntegrals &ints, int i, int j) {
  if ((i ^ j) & 1) return 0.0;
  return ints.one_body(i >> 1, j >> 1);
}

// Chemists' (ij|kl) over spin orbitals: nonzero iff spins match pairwise.
inline double eri_so(const MolecularIntegrals &ints, int i, int j, int k, int l) {
  if (((i ^ j) & 1) || ((k ^ l) & 1)) return 0.0;
  return ints.two_body(i >> 1, j >> 1, k >> 1, l >> 1);
}

} // namespace detail

/// Number of spin orbitals in which two determinants differ, divided by two.
/// 0 = identical, 1 = single excitation, 2 = double, >2 = disconnected.
inline int excitation_degree(const Determinant &x, const Determinant &y) {
  return (std::popcount(x.alpha ^ y.alpha) + std::popcount(x.beta ^ y.beta)) / 2;
}

/// Matrix element <x| H |y> of the electronic Hamiltonian by the
/// Slater-Condon rules, including the fermionic sign from the ascending
/// spin-orbital occupation ordering. Zero when the determinants differ in
/// more than two spin orbitals.
inline double slater_condon(const Determinant &x, const Determinant &y,
                            const MolecularIntegrals &ints) {
  if (x.n_alpha() != y.n_alpha() || x.n_beta() != y.n_beta())
    throw std::invalid_argument("slater_condon: determinants in different sectors");

  const std::uint64_t ox = x.spin_orbital_bits();
  const std::uint64_t oy = y.spin_orbital_bits();
  const std::uint64_t diff = ox ^ oy;
  const int n_diff = std::popcount(diff);
  if (n_diff > 4) return 0.0;

  using detail::eri_so;
  using detail::h1_so;
  using detail::ladder_parity;

  if (n_diff == 0) {
    double e = ints.e_core;
    for (std::uint64_t occ = ox; occ;) {
      const int i = std::countr_zero(occ);
      occ &= occ - 1;
      e += h1_so(ints, i, i);
      for (std::uint64_t occ2 = ox; occ2;) {
        const int j = std::countr_zero(occ2);
        occ2 &= occ2 - 1;
        e += 0.5 * (eri_so(ints, i, i, j, j) - eri_so(ints, i, j, j, i));
      }
    }
    return e;
  }

  if (n_diff == 2) {
    const int i = std::countr_zero(ox & diff); // occupied in x only
    const int a = std::countr_zero(oy & diff); // occupied in y only
    double v = h1_so(ints, i, a);
    for (std::uint64_t occ = ox & ~(1ULL << i); occ;) {
      const int j = std::countr_zero(occ);
      occ &= occ - 1;
      v += eri_so(ints, i, a, j, j) - eri_so(ints, i, j, j, a);
    }
    const int sign = ladder_parity(ox, i) * ladder_parity(oy, a);
    return sign * v;
  }

  // Double excitation: {i < j} occupied only in x, {a < b} only in y,
  // paired as i->a, j->b.
  const std::uint64_t xs = ox & diff;
  const std::uint64_t ys = oy & diff;
  const int i = std::countr_zero(xs);
  const int j = std::countr_zero(xs & (xs - 1));
  const int a = std::countr_zero(ys);
  const int b = std::countr_zero(ys & (ys - 1));
  const double v = eri_so(ints, i, a, j, b) - eri_so(ints, i, b, j, a);
  const int sign = ladder_parity(ox, i) * ladder_parity(ox, j) *
                   ladder_parity(oy, a) * ladder_parity(oy, b);
  return sign * v;
}

} // namespace qsci
