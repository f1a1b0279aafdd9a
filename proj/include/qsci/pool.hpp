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
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qsci/integrals.hpp"
#include "qsci/jordan_wigner.hpp"
#include "qsci/pauli.hpp"
#include "qsci/slater_condon.hpp"

namespace qsci {

/// Spin-orbital single or double excitation against the Hartree-Fock
/// reference, with its classical amplitude. Indices use the interleaved map
/// (alpha = 2p, beta = 2p+1); doubles are canonicalized to i < j, a < b with
/// the reordering sign absorbed into the amplitude.
struct Excitation {
  enum class Kind { Single, Double };
  Kind kind = Kind::Single;
  int i = -1;
  int j = -1; // doubles only
  int a = -1;
  int b = -1; // doubles only
  double amplitude = 0.0;
};

/// One vocabulary entry: a fixed-angle Pauli rotation exp(i*angle*pauli).
/// Token 0 is the identity (empty string, angle 0).
struct PoolToken {
  int index = 0;
  PauliString pauli;
  double angle = 0.0;
  std::string source; // "I", "S i a" or "D i j a b" (1-based spin orbitals)
};

struct OperatorPool {
  int n_qubits = 0;
  std::vector<PoolToken> tokens;

  std::size_t size() const { return tokens.size(); }
};

namespace detail {

inline bool spin_orbital_occupied_in_hf(const MolecularIntegrals &ints, int s) {
  const int p = s >> 1;
  return (s & 1) ? p < ints.n_beta : p < ints.n_alpha;
}

inline std::string excitation_source(const Excitation &e) {
  char buf[64];
  if (e.kind == Excitation::Kind::Single)
    std::snprintf(buf, sizeof(buf), "S %d %d", e.i + 1, e.a + 1);
  else
    std::snprintf(buf, sizeof(buf), "D %d %d %d %d", e.i + 1, e.j + 1, e.a + 1, e.b + 1);
  return buf;
}

} // namespace detail

/// Built-in amplitude fallback: spin-orbital MP2 doubles
///   t_ij^ab = <ij||ab> / (eps_i + eps_j - eps_a - eps_b),
/// singles excluded (amplitude zero at first order). Requires orbital
/// energies; a near-vanishing denominator (|denom| < 1e-8) is an error.
inline std::vector<Excitation> mp2_amplitudes(const MolecularIntegrals &ints) {
  if (!ints.orb_energies)
    throw std::invalid_argument("mp2_amplitudes: orbital energies are required");
  const auto &eps = *ints.orb_energies;
  const int n_so = ints.n_qubits();

  std::vector<int> occ, virt;
  for (int s = 0; s < n_so; ++s)
    (detail::spin_orbital_occupied_in_hf(ints, s) ? occ : virt).push_back(s);

  std::vector<Excitation> out;
  for (std::size_t ii = 0; ii < occ.size(); ++ii)
    for (std::size_t jj = ii + 1; jj < occ.size(); ++jj)
      for (std::size_t aa = 0; aa < virt.size(); ++aa)
        for (std::size_t bb = aa + 1; bb < virt.size(); ++bb) {
          const int i = occ[ii], j = occ[jj], a = virt[aa], b = virt[bb];
          const double numerator =
              detail::eri_so(ints, i, a, j, b) - detail::eri_so(ints, i, b, j, a);
          if (numerator == 0.0) continue;
          const double denom = eps[static_cast<std::size_t>(i >> 1)] +
                               eps[static_cast<std::size_t>(j >> 1)] -
                               eps[static_cast<std::size_t>(a >> 1)] -
                               eps[static_cast<std::size_t>(b >> 1)];
          if (std::abs(denom) < 1e-8)
            throw std::runtime_error("mp2_amplitudes: vanishing denominator");
          Excitation e;
          e.kind = Excitation::Kind::Double;
          e.i = i;
          e.j = j;
          e.a = a;
          e.b = b;
          e.amplitude = numerator / denom;
          out.push_back(e);
        }
  return out;
}

/// Amplitude file: `S i a t` and `D i j a b t` lines with 1-based spin-orbital
/// indices on the interleaved map; `#` starts a comment. Occupied indices must
/// be occupied in the Hartree-Fock reference and virtual ones unoccupied.
/// Doubles are canonicalized (i < j, a < b, sign tracked); repeated
/// excitations are an error.
inline std::vector<Excitation> parse_amplitudes(std::istream &in, const MolecularIntegrals &ints) {
  const int n_spin_orbitals = ints.n_qubits();
  std::vector<Excitation> out;
  std::set<std::tuple<int, int, int, int, int>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string &why) {
      throw std::runtime_error("amplitude file line " + std::to_string(line_no) + ": " + why);
    };
    auto read_index = [&](bool occupied) {
      long v;
      if (!(ls >> v)) fail("malformed line");
      if (v < 1 || v > n_spin_orbitals) fail("spin-orbital index out of range");
      const int s = static_cast<int>(v - 1);
      if (detail::spin_orbital_occupied_in_hf(ints, s) != occupied)
        fail(occupied ? "occupied index is unoccupied in the reference"
                      : "virtual index is occupied in the reference");
      return s;
    };
    Excitation e;
    if (kind == "S") {
      e.kind = Excitation::Kind::Single;
      e.i = read_index(true);
      e.a = read_index(false);
    } else if (kind == "D") {
      e.kind = Excitation::Kind::Double;
      e.i = read_index(true);
      e.j = read_index(true);
      e.a = read_index(false);
      e.b = read_index(false);
      if (e.i == e.j || e.a == e.b) fail("double excitation with repeated indices");
    } else {
      fail("unknown excitation kind '" + kind + "'");
    }
    if (!(ls >> e.amplitude)) fail("malformed line");
    std::string extra;
    if (ls >> extra) fail("trailing tokens");

    double sign = 1.0;
    if (e.kind == Excitation::Kind::Double) {
      if (e.i > e.j) {
        std::swap(e.i, e.j);
        sign = -sign;
      }
      if (e.a > e.b) {
        std::swap(e.a, e.b);
        sign = -sign;
      }
    }
    e.amplitude *= sign;
    const auto key = std::make_tuple(static_cast<int>(e.kind), e.i, e.j, e.a, e.b);
    if (!seen.insert(key).second) fail("duplicate excitation");
    out.push_back(e);
  }
  return out;
}

/// Build the discrete token vocabulary from excitation amplitudes:
///   1. keep excitations with |t| > threshold;
///   2. expand the anti-Hermitian generator under Jordan-Wigner into
///      i * sum_l c_l P_l;
///   3. strip parity: delete Z letters strictly between the excitation's
///      lowest and highest acted qubits, keeping the endpoint letters;
///   4. among the stripped terms take the first in canonical string order of
///      those with maximal |c_l| as the representative, with angle c_l* * t.
/// The identity token is prepended; singles are ordered by (i, a), doubles by
/// (i, j, a, b), so vocabulary ids are stable.
inline OperatorPool build_pool(std::vector<Excitation> amps, int n_qubits,
                               double threshold = 1e-6) {
  OperatorPool pool;
  pool.n_qubits = n_qubits;
  pool.tokens.push_back({0, PauliString(n_qubits), 0.0, "I"});

  std::sort(amps.begin(), amps.end(), [](const Excitation &x, const Excitation &y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    return std::tie(x.i, x.j, x.a, x.b) < std::tie(y.i, y.j, y.a, y.b);
  });

  for (const auto &e : amps) {
    if (!std::isfinite(e.amplitude)) throw std::invalid_argument("build_pool: non-finite amplitude");
    if (std::abs(e.amplitude) <= threshold) continue;

    const auto terms = e.kind == Excitation::Kind::Single
                           ? jw_single_generator(e.i, e.a, n_qubits)
                           : jw_double_generator(e.i, e.j, e.a, e.b, n_qubits);

    const int lo = e.kind == Excitation::Kind::Single ? std::min(e.i, e.a)
                                                      : std::min({e.i, e.j, e.a, e.b});
    const int hi = e.kind == Excitation::Kind::Single ? std::max(e.i, e.a)
                                                      : std::max({e.i, e.j, e.a, e.b});
    std::uint64_t interior = 0;
    for (int q = lo + 1; q < hi; ++q) interior |= 1ULL << q;

    // Strip interior Z letters and accumulate (stripping cannot merge terms
    // with distinct endpoint letter patterns, but accumulate defensively).
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> stripped;
    for (const auto &[c, p] : terms) {
      const std::uint64_t z_only = p.z_mask() & ~p.x_mask();
      const std::uint64_t z = p.z_mask() & ~(z_only & interior);
      stripped[{p.x_mask(), z}] += c;
    }

    PauliString best;
    double best_coeff = 0.0;
    bool have = false;
    for (const auto &[key, c] : stripped) {
      if (std::abs(c) < 1e-13) continue;
      PauliString p(n_qubits, key.first, key.second);
      if (!have || std::abs(c) > std::abs(best_coeff) + 1e-13 ||
          (std::abs(std::abs(c) - std::abs(best_coeff)) <= 1e-13 && p.canonical_less(best))) {
        best = p;
        best_coeff = c;
        have = true;
      }
    }
    if (!have) continue; // generator vanished entirely

    PoolToken token;
    token.index = static_cast<int>(pool.tokens.size());
    token.pauli = best;
    token.angle = best_coeff * e.amplitude;
    token.source = detail::excitation_source(e);
    pool.tokens.push_back(std::move(token));
  }
  return pool;
}

/// Pool dump: one `# key=value` metadata line, then CSV rows.
inline void write_pool_csv(std::ostream &out, const OperatorPool &pool) {
  out << "# angle_convention=representative_coefficient*amplitude\n";
  out << "token_id,pauli,angle,source\n";
  char buf[64];
  for (const auto &t : pool.tokens) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.angle);
    out << t.index << "," << t.pauli.to_string() << "," << buf << "," << t.source << "\n";
  }
}

} // namespace qsci
