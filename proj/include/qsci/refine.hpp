/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsci/qsci.hpp"
#include "qsci/slater_condon.hpp"
#include "qsci/wavefunction.hpp"

namespace qsci {

/// Merge sparse wavefunctions over one sector into a single wavefunction with
/// at most d_max determinants:
///   1. assemble H_jk = <psi_j|H|psi_k> and S_jk = <psi_j|psi_k> on the union
///      support;
///   2. canonically orthogonalize S (eigenvalues < 1e-10 dropped) and take the
///      lowest eigenpair of the generalized problem;
///   3. mix coefficients A_x = sum_j c_j a_x^(j);
///   4. keep the d_max determinants of largest |A_x|^2 (ties by canonical
///      order) and rediagonalize in that subspace.
/// When the union fits within d_max the result equals the direct union
/// diagonalization, with energy <= min_j E_j.
inline SampledWavefunction refine(const std::vector<SampledWavefunction> &inputs,
                                  std::size_t d_max, const MolecularIntegrals &ints) {
  if (inputs.empty()) throw std::invalid_argument("refine: empty input list");
  if (d_max < 1) throw std::invalid_argument("refine: d_max must be >= 1");
  for (const auto &wf : inputs) {
    if (wf.coeffs.empty()) throw std::invalid_argument("refine: input with empty support");
    const auto &first = wf.coeffs.begin()->first;
    const auto &ref = inputs.front().coeffs.begin()->first;
    if (first.n_alpha() != ref.n_alpha() || first.n_beta() != ref.n_beta())
      throw std::invalid_argument("refine: inputs lie in different sectors");
  }

  const int n = static_cast<int>(inputs.size());

  // Sparse supports as parallel arrays for the pairwise assembly.
  std::vector<std::vector<Determinant>> dets(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> amps(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    for (const auto &[d, c] : inputs[static_cast<std::size_t>(j)].coeffs) {
      dets[static_cast<std::size_t>(j)].push_back(d);
      amps[static_cast<std::size_t>(j)].push_back(c);
    }

  Eigen::MatrixXd h(n, n), s(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      double hjk = 0.0;
      for (std::size_t x = 0; x < dets[static_cast<std::size_t>(j)].size(); ++x)
        for (std::size_t y = 0; y < dets[static_cast<std::size_t>(k)].size(); ++y) {
          const auto &dx = dets[static_cast<std::size_t>(j)][x];
          const auto &dy = dets[static_cast<std::size_t>(k)][y];
          if (excitation_degree(dx, dy) > 2) continue;
          hjk += amps[static_cast<std::size_t>(j)][x] * amps[static_cast<std::size_t>(k)][y] *
                 slater_condon(dx, dy, ints);
        }
      h(j, k) = h(k, j) = hjk;
      const double sjk =
          inputs[static_cast<std::size_t>(j)].overlap(inputs[static_cast<std::size_t>(k)]);
      s(j, k) = s(k, j) = sjk;
    }

  // Canonical orthogonalization of the (possibly singular) overlap.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(s);
  std::vector<int> kept;
  for (int k = 0; k < n; ++k)
    if (es_s.eigenvalues()(k) >= 1e-10) kept.push_back(k);
  if (kept.empty()) throw std::runtime_error("refine: overlap matrix has numerical rank 0");
  Eigen::MatrixXd basis(n, static_cast<int>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c)
    basis.col(static_cast<int>(c)) =
        es_s.eigenvectors().col(kept[c]) / std::sqrt(es_s.eigenvalues()(kept[c]));

  const Eigen::MatrixXd reduced = basis.transpose() * h * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_h(reduced);
  const Eigen::VectorXd mix = basis * es_h.eigenvectors().col(0);

  // Mixed coefficients on the union support (selection on |A_x|^2 is
  // scale-invariant, so no renormalization before the cut).
  std::map<Determinant, double> mixed;
  for (int j = 0; j < n; ++j)
    for (std::size_t x = 0; x < dets[static_cast<std::size_t>(j)].size(); ++x)
      mixed[dets[static_cast<std::size_t>(j)][x]] +=
          mix(j) * amps[static_cast<std::size_t>(j)][x];

  DeterminantSet top;
  if (mixed.size() <= d_max) {
    for (const auto &[d, a] : mixed) top.entries[d] = 1.0;
  } else {
    std::vector<std::pair<Determinant, double>> items(mixed.begin(), mixed.end());
    std::sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
      const double wa = a.second * a.second, wb = b.second * b.second;
      if (wa != wb) return wa > wb;
      return a.first < b.first;
    });
    for (std::size_t i = 0; i < d_max; ++i) top.entries[items[i].first] = 1.0;
  }
  return diagonalize_subspace(top, ints);
}

/// Within-batch merge of the M wavefunctions of one iteration.
inline SampledWavefunction local_refine(const std::vector<SampledWavefunction> &batch,
                                        std::size_t d_max, const MolecularIntegrals &ints) {
  return refine(batch, d_max, ints);
}

/// Accumulated cross-iteration refinement state.
struct RefinementState {
  SampledWavefunction global;
  int iteration = 0; // local refinements absorbed so far

  struct HistoryRow {
    int iter = 0;
    double e_local = 0.0;
    double e_global = 0.0;
    std::size_t support_local = 0;
    std::size_t support_global = 0;
  };
  std::vector<HistoryRow> history;
};

/// Fold one local refinement into the running global wavefunction:
/// the first local result is adopted as-is, afterwards the global state is
/// refine({previous global, local}).
inline RefinementState global_refine(RefinementState state, const SampledWavefunction &local,
                                     std::size_t d_max, const MolecularIntegrals &ints) {
  if (local.coeffs.empty()) throw std::invalid_argument("global_refine: empty local wavefunction");
  if (state.iteration == 0) {
    state.global = local;
  } else {
    const auto &g = state.global.coeffs.begin()->first;
    const auto &l = local.coeffs.begin()->first;
    if (g.n_alpha() != l.n_alpha() || g.n_beta() != l.n_beta())
      throw std::invalid_argument("global_refine: sector mismatch between global and local");
    state.global = refine({state.global, local}, d_max, ints);
  }
  ++state.iteration;
  state.history.push_back({state.iteration, local.energy, state.global.energy,
                           local.support_size(), state.global.support_size()});
  return state;
}

} // namespace qsci
