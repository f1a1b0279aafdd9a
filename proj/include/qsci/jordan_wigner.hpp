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
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qsci/integrals.hpp"
#include "qsci/pauli.hpp"

namespace qsci {
namespace detail {

// Jordan-Wigner images of the ladder operators on spin orbital (= qubit) s,
// with |1> = occupied and the parity string on qubits below s:
//   a_s      = Z_{<s} (X_s + iY_s)/2
//   a_s^dag  = Z_{<s} (X_s - iY_s)/2
inline std::vector<WeightedPauli> jw_ladder(int s, bool dagger) {
  const std::uint64_t parity = s == 0 ? 0ULL : ((1ULL << s) - 1);
  const std::uint64_t bit = 1ULL << s;
  const std::complex<double> half(0.5, 0.0);
  const std::complex<double> ihalf(0.0, dagger ? -0.5 : 0.5);
  return {{half, bit, parity}, {ihalf, bit, parity | bit}};
}

inline std::vector<WeightedPauli> jw_product(const std::vector<WeightedPauli> &lhs,
                                             const std::vector<WeightedPauli> &rhs) {
  std::vector<WeightedPauli> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto &l : lhs)
    for (const auto &r : rhs) out.push_back(mul(l, r));
  return out;
}

// Product a^dag_{ops[0]} ... applied left to right; `dagger[k]` marks creators.
inline std::vector<WeightedPauli> jw_ladder_product(const std::vector<int> &ops,
                                                    const std::vector<bool> &dagger) {
  std::vector<WeightedPauli> acc = jw_ladder(ops[0], dagger[0]);
  for (std::size_t k = 1; k < ops.size(); ++k)
    acc = jw_product(acc, jw_ladder(ops[k], dagger[k]));
  return acc;
}

// Accumulator keyed by (x, z) masks.
class PauliAccumulator {
public:
  void add(const std::vector<WeightedPauli> &terms, std::complex<double> scale) {
    for (const auto &t : terms) map_[{t.x, t.z}] += scale * t.coeff;
  }

  // Extract real-coefficient terms, checking Hermiticity, dropping noise.
  PauliHamiltonian to_hamiltonian(int n_qubits, double imag_tol = 1e-10,
                                  double drop_tol = 1e-13) const {
    PauliHamiltonian h;
    h.n_qubits = n_qubits;
    for (const auto &[key, c] : map_) {
      if (std::abs(c.imag()) > imag_tol)
        throw std::runtime_error("Jordan-Wigner produced a non-Hermitian coefficient");
      if (std::abs(c.real()) <= drop_tol) continue;
      h.terms.emplace_back(c.real(), PauliString(n_qubits, key.first, key.second));
    }
    std::sort(h.terms.begin(), h.terms.end(), [](const auto &a, const auto &b) {
      return a.second.canonical_less(b.second);
    });
    return h;
  }

  // Extract as i * sum_l c_l P_l with real c_l (anti-Hermitian input).
  std::vector<std::pair<double, PauliString>> to_antihermitian_terms(int n_qubits,
                                                                     double real_tol = 1e-10) const {
    std::vector<std::pair<double, PauliString>> out;
    for (const auto &[key, c] : map_) {
      if (std::abs(c.real()) > real_tol)
        throw std::runtime_error("generator expansion is not anti-Hermitian");
      if (std::abs(c.imag()) <= 1e-13) continue;
      out.emplace_back(c.imag(), PauliString(n_qubits, key.first, key.second));
    }
    std::sort(out.begin(), out.end(),
              [](const auto &a, const auto &b) { return a.second.canonical_less(b.second); });
    return out;
  }

private:
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::complex<double>> map_;
};

} // namespace detail

/// Jordan-Wigner image of the electronic Hamiltonian
///   H = e_core + sum_{pq,s} h1[p][q] a^dag_{ps} a_{qs}
///       + 1/2 sum_{pqrs,st} (pq|rs) a^dag_{ps} a^dag_{rt} a_{st} a_{qs}
/// on the interleaved spin-orbital/qubit map (alpha = 2p, beta = 2p+1).
/// Coefficients are real for real integrals; terms come out deduplicated and
/// canonically sorted.
inline PauliHamiltonian jordan_wigner(const MolecularIntegrals &ints) {
  const int n = ints.n_orb;
  const int nq = ints.n_qubits();
  detail::PauliAccumulator acc;

  acc.add({{std::complex<double>(1.0, 0.0), 0, 0}}, ints.e_core);

  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double v = ints.one_body(p, q);
      if (v == 0.0) continue;
      for (int sp = 0; sp < 2; ++sp)
        acc.add(detail::jw_ladder_product({2 * p + sp, 2 * q + sp}, {true, false}), v);
    }

  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = ints.two_body(p, q, r, s);
          if (v == 0.0) continue;
          for (int sp = 0; sp < 2; ++sp)
            for (int tp = 0; tp < 2; ++tp) {
              const int a = 2 * p + sp, bq = 2 * q + sp;
              const int c = 2 * r + tp, d = 2 * s + tp;
              acc.add(detail::jw_ladder_product({a, c, d, bq}, {true, true, false, false}),
                      0.5 * v);
            }
        }

  return acc.to_hamiltonian(nq);
}

/// Jordan-Wigner expansion of an anti-Hermitian excitation generator
///   tau = a^dag_a a_i - a^dag_i a_a                        (single)
///   tau = a^dag_a a^dag_b a_j a_i - a^dag_i a^dag_j a_b a_a (double)
/// returned as the real coefficients c_l of tau = i * sum_l c_l P_l.
inline std::vector<std::pair<double, PauliString>>
jw_single_generator(int i, int a, int n_qubits) {
  detail::PauliAccumulator acc;
  acc.add(detail::jw_ladder_product({a, i}, {true, false}), 1.0);
  acc.add(detail::jw_ladder_product({i, a}, {true, false}), -1.0);
  return acc.to_antihermitian_terms(n_qubits);
}

inline std::vector<std::pair<double, PauliString>>
jw_double_generator(int i, int j, int a, int b, int n_qubits) {
  detail::PauliAccumulator acc;
  acc.add(detail::jw_ladder_product({a, b, j, i}, {true, true, false, false}), 1.0);
  acc.add(detail::jw_ladder_product({i, j, b, a}, {true, true, false, false}), -1.0);
  return acc.to_antihermitian_terms(n_qubits);
}

} // namespace qsci
