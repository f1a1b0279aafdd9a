/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/eigen_solvers.hpp"
#include "qsci/integrals.hpp"
#include "qsci/slater_condon.hpp"
#include "qsci/wavefunction.hpp"

namespace qsci {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

inline std::uint64_t sector_dimension(int n_orb, int n_alpha, int n_beta) {
  return binomial(n_orb, n_alpha) * binomial(n_orb, n_beta);
}

namespace detail {

// All n_orb-bit masks with k bits set, ascending (Gosper's hack).
inline std::vector<std::uint64_t> bit_combinations(int n_orb, int k) {
  std::vector<std::uint64_t> out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint64_t limit = n_orb >= 64 ? ~0ULL : (1ULL << n_orb);
  std::uint64_t v = (1ULL << k) - 1;
  while (v < limit) {
    out.push_back(v);
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

} // namespace detail

/// All determinants of the (n_alpha, n_beta) sector in canonical order.
inline std::vector<Determinant> enumerate_sector(int n_orb, int n_alpha, int n_beta) {
  const auto alphas = detail::bit_combinations(n_orb, n_alpha);
  const auto betas = detail::bit_combinations(n_orb, n_beta);
  std::vector<Determinant> dets;
  dets.reserve(alphas.size() * betas.size());
  for (const auto a : alphas)
    for (const auto b : betas) dets.push_back({a, b});
  return dets;
}

/// Dense subspace Hamiltonian with entries slater_condon(dets[i], dets[j]).
inline Eigen::MatrixXd build_hamiltonian_matrix(const std::vector<Determinant> &dets,
                                                const MolecularIntegrals &ints) {
  const Eigen::Index n = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = slater_condon(dets[static_cast<std::size_t>(i)], dets[static_cast<std::size_t>(i)], ints);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto &x = dets[static_cast<std::size_t>(i)];
      const auto &y = dets[static_cast<std::size_t>(j)];
      const double v = excitation_degree(x, y) > 2 ? 0.0 : slater_condon(x, y, ints);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

namespace detail {

// Sparse Hamiltonian over a determinant list, assembled by enumerating single
// and double excitations and keeping those that land inside the list.
class SparseHamiltonian {
public:
  SparseHamiltonian(const std::vector<Determinant> &dets, const MolecularIntegrals &ints) {
    const std::size_t n = dets.size();
    std::unordered_map<Determinant, std::uint32_t, DeterminantHash> index;
    index.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) index.emplace(dets[i], static_cast<std::uint32_t>(i));

    row_start_.assign(n + 1, 0);
    diag_.resize(n);
    std::vector<std::pair<std::uint32_t, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
      const Determinant &d = dets[i];
      diag_[i] = slater_condon(d, d, ints);
      row.clear();
      const std::uint64_t occ = d.spin_orbital_bits();
      std::vector<int> occ_list, virt_list;
      for (int s = 0; s < ints.n_qubits(); ++s)
        ((occ >> s) & 1ULL) ? occ_list.push_back(s) : virt_list.push_back(s);

      auto try_pair = [&](std::uint64_t bits) {
        const Determinant o = Determinant::from_spin_orbital_bits(bits);
        const auto it = index.find(o);
        if (it == index.end() || it->second <= i) return;
        const double v = slater_condon(d, o, ints);
        if (v != 0.0) row.emplace_back(it->second, v);
      };

      for (const int p : occ_list)
        for (const int a : virt_list) {
          if (((p ^ a) & 1) != 0) continue; // spin-conserving singles only
          try_pair((occ & ~(1ULL << p)) | (1ULL << a));
        }
      for (std::size_t pi = 0; pi < occ_list.size(); ++pi)
        for (std::size_t pj = pi + 1; pj < occ_list.size(); ++pj)
          for (std::size_t ai = 0; ai < virt_list.size(); ++ai)
            for (std::size_t aj = ai + 1; aj < virt_list.size(); ++aj) {
              const int p = occ_list[pi], q = occ_list[pj];
              const int a = virt_list[ai], b = virt_list[aj];
              // Spin sectors must be preserved.
              if ((p & 1) + (q & 1) != (a & 1) + (b & 1)) continue;
              try_pair((occ & ~(1ULL << p) & ~(1ULL << q)) | (1ULL << a) | (1ULL << b));
            }
      cols_.reserve(cols_.size() + row.size());
      for (const auto &[j, v] : row) {
        cols_.push_back(j);
        vals_.push_back(v);
      }
      row_start_[i + 1] = cols_.size();
    }
  }

  // y = H x, using the strictly-upper storage plus its transpose.
  void apply(const Eigen::VectorXd &x, Eigen::VectorXd &y) const {
    const std::size_t n = diag_.size();
    y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = diag_[i] * x[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        const auto j = cols_[k];
        const double v = vals_[k];
        y[static_cast<Eigen::Index>(i)] += v * x[j];
        y[j] += v * x[static_cast<Eigen::Index>(i)];
      }
  }

private:
  std::vector<double> diag_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

// Deterministic fallback pseudo-noise used to seed iterative solvers.
inline double start_noise(std::uint64_t i) {
  std::uint64_t z = (i + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
}

} // namespace detail

struct FciOptions {
  std::uint64_t determinant_cap = 1000000; // refuse larger sectors
  int dense_cutoff = 2000;                 // dense solver up to this dimension
};

/// Lowest eigenpair over a fixed determinant list. Dense below the cutoff,
/// restarted Lanczos above. The returned eigenvector is sign-fixed: the
/// coefficient on `reference` (or, if absent there, on the largest-magnitude
/// determinant) is made nonnegative; among degenerate lowest eigenvectors the
/// one with the largest |coefficient| on `reference` is chosen.
inline SampledWavefunction solve_lowest_state(const std::vector<Determinant> &dets,
                                              const MolecularIntegrals &ints,
                                              const Determinant &reference,
                                              int dense_cutoff = 2000) {
  if (dets.empty()) throw std::invalid_argument("solve_lowest_state: empty determinant set");
  const std::size_t n = dets.size();

  Eigen::VectorXd vec;
  double energy = 0.0;
  std::size_t ref_pos = n;
  for (std::size_t i = 0; i < n; ++i)
    if (dets[i] == reference) {
      ref_pos = i;
      break;
    }

  if (n <= static_cast<std::size_t>(dense_cutoff)) {
    const Eigen::MatrixXd h = build_hamiltonian_matrix(dets, ints);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    energy = es.eigenvalues()(0);
    // Resolve degeneracy toward the reference determinant.
    Eigen::Index pick = 0;
    if (ref_pos < n) {
      const double scale = std::max(1.0, std::abs(energy));
      double best = -1.0;
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k) - energy > 1e-11 * scale) break;
        const double c = std::abs(es.eigenvectors()(static_cast<Eigen::Index>(ref_pos), k));
        if (c > best + 1e-14) {
          best = c;
          pick = k;
        }
      }
    }
    vec = es.eigenvectors().col(pick);
  } else {
    const detail::SparseHamiltonian sparse(dets, ints);
    Eigen::VectorXd start(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      start[static_cast<Eigen::Index>(i)] = 1e-2 * detail::start_noise(i);
    start[static_cast<Eigen::Index>(ref_pos < n ? ref_pos : 0)] += 1.0;
    auto apply = [&sparse](const Eigen::VectorXd &x, Eigen::VectorXd &y) { sparse.apply(x, y); };
    std::tie(energy, vec) = lanczos_lowest(apply, static_cast<Eigen::Index>(n), start);
  }

  vec.normalize();
  // Sign fix: reference coefficient nonnegative, falling back to the largest
  // |coefficient| entry (first in canonical order on ties).
  std::size_t fix = ref_pos;
  if (fix >= n || std::abs(vec[static_cast<Eigen::Index>(fix)]) <= 1e-12) {
    fix = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(vec[static_cast<Eigen::Index>(i)]) >
          std::abs(vec[static_cast<Eigen::Index>(fix)]) + 1e-14)
        fix = i;
  }
  if (vec[static_cast<Eigen::Index>(fix)] < 0.0) vec = -vec;

  SampledWavefunction wf;
  wf.energy = energy;
  for (std::size_t i = 0; i < n; ++i) wf.coeffs[dets[i]] = vec[static_cast<Eigen::Index>(i)];
  return wf;
}

/// Exact ground state of the full (n_alpha, n_beta) sector.
inline std::pair<double, SampledWavefunction> fci_ground_state(const MolecularIntegrals &ints,
                                                               const FciOptions &opts = {}) {
  const std::uint64_t dim = sector_dimension(ints.n_orb, ints.n_alpha, ints.n_beta);
  if (dim == 0) throw std::invalid_argument("fci_ground_state: empty sector");
  if (dim > opts.determinant_cap)
    throw std::runtime_error("fci_ground_state: sector dimension exceeds cap");
  const auto dets = enumerate_sector(ints.n_orb, ints.n_alpha, ints.n_beta);
  auto wf = solve_lowest_state(dets, ints, hf_determinant(ints), opts.dense_cutoff);
  return {wf.energy, std::move(wf)};
}

} // namespace qsci
