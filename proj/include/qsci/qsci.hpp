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
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/fci.hpp"
#include "qsci/integrals.hpp"
#include "qsci/rng.hpp"
#include "qsci/statevector.hpp"
#include "qsci/wavefunction.hpp"

namespace qsci {

/// Ordered determinant set with a sampling frequency (or weight) per member.
/// Members stay unique and in canonical order; all belong to one
/// (n_alpha, n_beta) sector by construction of the producing operations.
struct DeterminantSet {
  std::map<Determinant, double> entries;

  std::size_t size() const { return entries.size(); }
  bool contains(const Determinant &d) const { return entries.count(d) != 0; }

  std::vector<Determinant> determinants() const {
    std::vector<Determinant> out;
    out.reserve(entries.size());
    for (const auto &[d, w] : entries) out.push_back(d);
    return out;
  }
};

/// Keep only bitstrings in the (n_alpha, n_beta) sector; frequencies carry
/// over bit-exactly. An empty result is returned, not an error.
inline DeterminantSet select_determinants(const ShotHistogram &hist,
                                          std::pair<int, int> sector) {
  DeterminantSet set;
  for (const auto &[bits, count] : hist.counts) {
    const Determinant d = Determinant::from_spin_orbital_bits(bits);
    if (d.n_alpha() != sector.first || d.n_beta() != sector.second) continue;
    set.entries[d] += static_cast<double>(count);
  }
  return set;
}

namespace detail {

// All subsets of `mask` with `k` bits set.
inline std::vector<std::uint64_t> masked_combinations(std::uint64_t mask, int k) {
  std::vector<int> positions;
  for (std::uint64_t m = mask; m;) {
    positions.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  const int n = static_cast<int>(positions.size());
  std::vector<std::uint64_t> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t bits = 0;
    for (const int i : idx) bits |= 1ULL << positions[static_cast<std::size_t>(i)];
    out.push_back(bits);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

} // namespace detail

/// Completion class of a determinant: all alpha/beta reassignments over its
/// open-shell orbitals that preserve (n_alpha, n_beta). The doubly occupied
/// and empty orbitals are untouched; the class has size C(m, n_alpha_open)
/// for m open shells.
inline std::vector<Determinant> completion_class(const Determinant &d) {
  const std::uint64_t doubly = d.alpha & d.beta;
  const std::uint64_t open = d.alpha ^ d.beta;
  const int n_alpha_open = std::popcount(d.alpha & open);
  std::vector<Determinant> out;
  for (const std::uint64_t s : detail::masked_combinations(open, n_alpha_open))
    out.push_back({doubly | s, doubly | (open & ~s)});
  return out;
}

/// Close the set under completion classes. Generated partners inherit the
/// seed's frequency; members generated by several seeds take the maximum.
/// Idempotent.
inline DeterminantSet symmetry_complete(const DeterminantSet &set) {
  DeterminantSet out;
  for (const auto &[seed, freq] : set.entries)
    for (const auto &partner : completion_class(seed)) {
      auto [it, inserted] = out.entries.emplace(partner, freq);
      if (!inserted) it->second = std::max(it->second, freq);
    }
  return out;
}

/// Top d_max by frequency, ties broken by canonical determinant order.
inline DeterminantSet truncate(const DeterminantSet &set, std::size_t d_max) {
  if (d_max < 1) throw std::invalid_argument("truncate: d_max must be >= 1");
  if (set.size() <= d_max) return set;
  std::vector<std::pair<Determinant, double>> items(set.entries.begin(), set.entries.end());
  std::sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  DeterminantSet out;
  for (std::size_t i = 0; i < d_max; ++i) out.entries.insert(items[i]);
  return out;
}

/// Lowest eigenpair of the subspace Hamiltonian spanned by the set. The
/// energy is variational within the sector.
inline SampledWavefunction diagonalize_subspace(const DeterminantSet &set,
                                                const MolecularIntegrals &ints,
                                                int dense_cutoff = 2000) {
  if (set.size() == 0) throw std::invalid_argument("diagonalize_subspace: empty set");
  return solve_lowest_state(set.determinants(), ints, hf_determinant(ints), dense_cutoff);
}

/// Full QSCI evaluation of a prepared state:
/// sample -> sector filter -> symmetry completion -> truncation -> subspace
/// diagonalization, in that order.
inline SampledWavefunction qsci_energy(const Statevector &state, std::uint64_t n_shots,
                                       std::size_t d_max, const MolecularIntegrals &ints,
                                       RngStream &rng) {
  const auto hist = sample(state, n_shots, rng);
  auto set = select_determinants(hist, {ints.n_alpha, ints.n_beta});
  if (set.size() == 0)
    throw std::runtime_error("qsci_energy: no sampled determinant lies in the target sector");
  set = symmetry_complete(set);
  set = truncate(set, d_max);
  return diagonalize_subspace(set, ints);
}

} // namespace qsci
