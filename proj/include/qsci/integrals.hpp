/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsci/determinant.hpp"

namespace qsci {

/// Molecular integrals over spatial orbitals, chemists' notation (pq|rs).
///
/// Storage is a dense 4-index array with the 8-fold permutational symmetry
/// expanded on load, sized for active spaces up to n_orb = 24. All energies
/// are in Hartree.
class MolecularIntegrals {
public:
  int n_orb = 0;
  int n_alpha = 0;
  int n_beta = 0;
  double e_core = 0.0;
  std::optional<std::vector<double>> orb_energies;

  MolecularIntegrals() = default;
  MolecularIntegrals(int n_orb_, int n_alpha_, int n_beta_)
      : n_orb(n_orb_), n_alpha(n_alpha_), n_beta(n_beta_) {
    if (n_orb < 1 || n_orb > 24) throw std::invalid_argument("n_orb must be in [1, 24]");
    if (n_alpha < 0 || n_alpha > n_orb || n_beta < 0 || n_beta > n_orb)
      throw std::invalid_argument("electron counts must be in [0, n_orb]");
    h1_.assign(static_cast<std::size_t>(n_orb) * n_orb, 0.0);
    h2_.assign(static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb, 0.0);
  }

  int n_qubits() const { return 2 * n_orb; }

  double one_body(int p, int q) const { return h1_[idx2(p, q)]; }
  double two_body(int p, int q, int r, int s) const { return h2_[idx4(p, q, r, s)]; }

  /// Set h1[p][q] and its transpose.
  void set_one_body(int p, int q, double v) {
    h1_[idx2(p, q)] = v;
    h1_[idx2(q, p)] = v;
  }

  /// Set (pq|rs) and its seven symmetry partners.
  void set_two_body(int p, int q, int r, int s, double v) {
    h2_[idx4(p, q, r, s)] = v;
    h2_[idx4(q, p, r, s)] = v;
    h2_[idx4(p, q, s, r)] = v;
    h2_[idx4(q, p, s, r)] = v;
    h2_[idx4(r, s, p, q)] = v;
    h2_[idx4(s, r, p, q)] = v;
    h2_[idx4(r, s, q, p)] = v;
    h2_[idx4(s, r, q, p)] = v;
  }

  /// Check h1 symmetry and the 8-fold (pq|rs) symmetry.
  void validate(double tol = 1e-10) const {
    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q <= p; ++q)
        if (std::abs(one_body(p, q) - one_body(q, p)) > tol)
          throw std::runtime_error("h1 not symmetric");
    for (int p = 0; p < n_orb; ++p)
      for (int q = 0; q < n_orb; ++q)
        for (int r = 0; r < n_orb; ++r)
          for (int s = 0; s < n_orb; ++s) {
            const double v = two_body(p, q, r, s);
            if (std::abs(v - two_body(q, p, r, s)) > tol ||
                std::abs(v - two_body(p, q, s, r)) > tol ||
                std::abs(v - two_body(r, s, p, q)) > tol)
              throw std::runtime_error("h2 lacks 8-fold symmetry");
          }
  }

private:
  std::size_t idx2(int p, int q) const {
    return static_cast<std::size_t>(p) * n_orb + q;
  }
  std::size_t idx4(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s;
  }

  std::vector<double> h1_;
  std::vector<double> h2_;
};

/// Hartree-Fock reference determinant: lowest n_alpha / n_beta orbitals filled.
inline Determinant hf_determinant(const MolecularIntegrals &ints) {
  Determinant d;
  d.alpha = ints.n_alpha == 0 ? 0ULL : (~0ULL >> (64 - ints.n_alpha));
  d.beta = ints.n_beta == 0 ? 0ULL : (~0ULL >> (64 - ints.n_beta));
  return d;
}

namespace detail {

inline double parse_fortran_double(const std::string &tok) {
  std::string t = tok;
  for (auto &c : t)
    if (c == 'D' || c == 'd') c = 'E';
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception &) {
    throw std::runtime_error("non-numeric value in FCIDUMP: '" + tok + "'");
  }
  if (pos != t.size()) throw std::runtime_error("non-numeric value in FCIDUMP: '" + tok + "'");
  return v;
}

} // namespace detail

/// Parse a Molpro-convention FCIDUMP.
///
/// Header namelist `&FCI NORB=.., NELEC=.., MS2=.., ...` terminated by `&END`
/// or `/`; ORBSYM and ISYM are read and ignored. Data lines are
/// `value i j k l` with 1-based indices:
///   i,j,k,l > 0          -> (ij|kl)
///   k = l = 0, i,j > 0   -> h1[i][j]
///   i > 0, j = k = l = 0 -> orbital energy eps_i
///   i = j = k = l = 0    -> core energy
inline MolecularIntegrals parse_fcidump(std::istream &in) {
  std::string header;
  {
    // The namelist may span lines; accumulate until the terminator.
    std::string line;
    bool done = false;
    while (!done && std::getline(in, line)) {
      header += " " + line;
      std::string upper = header;
      for (auto &c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (upper.find("&END") != std::string::npos || upper.find('/') != std::string::npos)
        done = true;
    }
    if (!done) throw std::runtime_error("malformed FCIDUMP namelist: missing &END or /");
  }

  auto upper = header;
  for (auto &c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper.find("&FCI") == std::string::npos)
    throw std::runtime_error("malformed FCIDUMP namelist: missing &FCI");

  auto find_field = [&](const std::string &key) -> std::optional<long> {
    const auto at = upper.find(key);
    if (at == std::string::npos) return std::nullopt;
    std::size_t i = at + key.size();
    while (i < upper.size() && std::isspace(static_cast<unsigned char>(upper[i]))) ++i;
    if (i >= upper.size() || upper[i] != '=')
      throw std::runtime_error("malformed FCIDUMP namelist: bad " + key);
    ++i;
    while (i < upper.size() && std::isspace(static_cast<unsigned char>(upper[i]))) ++i;
    std::size_t j = i;
    if (j < upper.size() && (upper[j] == '+' || upper[j] == '-')) ++j;
    while (j < upper.size() && std::isdigit(static_cast<unsigned char>(upper[j]))) ++j;
    if (i == j) throw std::runtime_error("malformed FCIDUMP namelist: bad " + key);
    return std::stol(upper.substr(i, j - i));
  };
  auto require_field = [&](const std::string &key) -> long {
    const auto v = find_field(key);
    if (!v) throw std::runtime_error("malformed FCIDUMP namelist: missing " + key);
    return *v;
  };

  const long norb = require_field("NORB");
  const long nelec = require_field("NELEC");
  const long ms2 = find_field("MS2").value_or(0);
  if (norb < 1 || norb > 24) throw std::runtime_error("NORB out of supported range [1, 24]");
  if ((nelec + ms2) % 2 != 0 || nelec < 0)
    throw std::runtime_error("inconsistent NELEC/MS2");
  const long na = (nelec + ms2) / 2;
  const long nb = (nelec - ms2) / 2;
  if (na < 0 || nb < 0 || na > norb || nb > norb)
    throw std::runtime_error("electron counts out of range");

  MolecularIntegrals ints(static_cast<int>(norb), static_cast<int>(na), static_cast<int>(nb));
  std::vector<double> eps(static_cast<std::size_t>(norb), 0.0);
  bool have_eps = false;

  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue; // blank line
    const double v = detail::parse_fortran_double(vtok);
    long i, j, k, l;
    if (!(ls >> i >> j >> k >> l)) throw std::runtime_error("malformed FCIDUMP line: " + line);
    auto check = [&](long x) {
      if (x < 0 || x > norb) throw std::runtime_error("FCIDUMP index out of range [1, NORB]");
    };
    check(i); check(j); check(k); check(l);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.e_core = v;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      eps[static_cast<std::size_t>(i - 1)] = v;
      have_eps = true;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      ints.set_one_body(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      ints.set_two_body(static_cast<int>(i - 1), static_cast<int>(j - 1),
                        static_cast<int>(k - 1), static_cast<int>(l - 1), v);
    } else {
      throw std::runtime_error("malformed FCIDUMP line: " + line);
    }
  }
  if (have_eps) ints.orb_energies = eps;
  return ints;
}

inline MolecularIntegrals parse_fcidump(const std::string &text) {
  std::istringstream ss(text);
  return parse_fcidump(ss);
}

} // namespace qsci
