/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"
#include "qsci/pauli.hpp"
#include "qsci/slater_condon.hpp"
#include "qsci/statevector.hpp"

// Brute-force reference computations, independent of the library's fast
// paths. Everything here scales exponentially and is for small systems only.
namespace qsci::oracle {

inline Eigen::MatrixXcd dense_pauli_matrix(const PauliString &p) {
  const auto dim = static_cast<Eigen::Index>(1ULL << p.n_qubits());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index ket = 0; ket < dim; ++ket) {
    const auto bra = static_cast<Eigen::Index>(static_cast<std::uint64_t>(ket) ^ p.x_mask());
    m(bra, ket) = pauli_phase_on_basis(p, static_cast<std::uint64_t>(ket));
  }
  return m;
}

inline Eigen::MatrixXcd dense_hamiltonian_matrix(const PauliHamiltonian &h) {
  const auto dim = static_cast<Eigen::Index>(1ULL << h.n_qubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &[c, p] : h.terms)
    for (Eigen::Index ket = 0; ket < dim; ++ket) {
      const auto bra = static_cast<Eigen::Index>(static_cast<std::uint64_t>(ket) ^ p.x_mask());
      m(bra, ket) += c * pauli_phase_on_basis(p, static_cast<std::uint64_t>(ket));
    }
  return m;
}

/// Sector-restricted matrix of a Pauli Hamiltonian: entry (i, j) =
/// <dets[i]| H |dets[j]> evaluated term by term.
inline Eigen::MatrixXcd sector_matrix(const PauliHamiltonian &h,
                                      const std::vector<Determinant> &dets) {
  const auto n = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = h.bra_ket(dets[static_cast<std::size_t>(i)].spin_orbital_bits(),
                          dets[static_cast<std::size_t>(j)].spin_orbital_bits());
  return m;
}

/// Dense Slater-Condon matrix over the full 2^n_qubits basis; entries between
/// different particle-number sectors are zero by construction.
inline Eigen::MatrixXd dense_slater_condon_matrix(const MolecularIntegrals &ints) {
  const auto dim = static_cast<Eigen::Index>(1ULL << ints.n_qubits());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto x = Determinant::from_spin_orbital_bits(static_cast<std::uint64_t>(i));
      const auto y = Determinant::from_spin_orbital_bits(static_cast<std::uint64_t>(j));
      if (x.n_alpha() != y.n_alpha() || x.n_beta() != y.n_beta()) continue;
      m(i, j) = slater_condon(x, y, ints);
    }
  return m;
}

/// exp(-i H t) for a Hermitian dense matrix, via eigendecomposition.
inline Eigen::MatrixXcd dense_expm_minus_iht(const Eigen::MatrixXcd &h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -evals(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(i theta P) as a dense matrix.
inline Eigen::MatrixXcd dense_pauli_rotation(const PauliString &p, double theta) {
  return dense_expm_minus_iht(dense_pauli_matrix(p), -theta);
}

inline Eigen::VectorXcd to_eigen(const Statevector &s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::uint64_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

} // namespace qsci::oracle
