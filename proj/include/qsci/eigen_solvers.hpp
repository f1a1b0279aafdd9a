/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qsci {

struct LanczosOptions {
  int max_basis = 60;
  int max_restarts = 200;
  double tol = 1e-11;
};

/// Lowest eigenpair of a symmetric operator by restarted Lanczos with full
/// reorthogonalization. `apply(x, y)` must compute y = A x. Deterministic for
/// a fixed start vector; restarts from the current Ritz vector until the
/// explicit residual passes the tolerance.
template <class MatVec>
std::pair<double, Eigen::VectorXd> lanczos_lowest(const MatVec &apply, Eigen::Index dim,
                                                  const Eigen::VectorXd &start,
                                                  const LanczosOptions &opts = {}) {
  if (dim < 1) throw std::invalid_argument("lanczos_lowest: empty problem");
  if (start.size() != dim) throw std::invalid_argument("lanczos_lowest: bad start vector");

  Eigen::VectorXd v = start.normalized();
  if (!(v.norm() > 0.5)) throw std::invalid_argument("lanczos_lowest: zero start vector");

  double theta = 0.0;
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    const int m = static_cast<int>(std::min<Eigen::Index>(opts.max_basis, dim));
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(static_cast<std::size_t>(m));
    basis.push_back(v);
    Eigen::VectorXd alpha(m), beta(m);
    int built = 0;
    Eigen::VectorXd w(dim);
    for (int j = 0; j < m; ++j) {
      apply(basis[static_cast<std::size_t>(j)], w);
      const double a = basis[static_cast<std::size_t>(j)].dot(w);
      alpha[j] = a;
      built = j + 1;
      if (j + 1 == m) break;
      // Full reorthogonalization, two passes.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto &u : basis) w -= u.dot(w) * u;
      const double b = w.norm();
      beta[j] = b;
      if (b < 1e-12) break; // invariant subspace reached
      basis.push_back(w / b);
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      tri(j, j) = alpha[j];
      if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    theta = es.eigenvalues()(0);
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < built; ++j) ritz += es.eigenvectors()(j, 0) * basis[static_cast<std::size_t>(j)];
    ritz.normalize();

    apply(ritz, w);
    const double residual = (w - theta * ritz).norm();
    v = ritz;
    if (residual <= opts.tol * std::max(1.0, std::abs(theta))) break;
  }
  return {theta, v};
}

} // namespace qsci
