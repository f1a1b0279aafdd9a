/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>

#include "qsci/baselines.hpp"
#include "support/random_systems.hpp"

using namespace qsci;

TEST(TimeEvolved, TinyTimeRecoversHartreeFock) {
  RngStream rng(71);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  const auto hf = hf_determinant(ints);
  RngStream run_rng(1);
  const auto cfg = TimeEvolvedConfig::single(1e-8, 2000);
  const auto wf = time_evolved_qsci(cfg, ints, 1, run_rng);
  EXPECT_NEAR(wf.energy, slater_condon(hf, hf, ints), 1e-10);
}

TEST(TimeEvolved, DeterministicForFixedSeed) {
  RngStream rng(72);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto cfg = TimeEvolvedConfig::single(0.4, 5000);
  RngStream a(5), b(5);
  const auto wa = time_evolved_qsci(cfg, ints, 10, a);
  const auto wb = time_evolved_qsci(cfg, ints, 10, b);
  EXPECT_EQ(wa.energy, wb.energy);
  EXPECT_EQ(wa.coeffs, wb.coeffs);
}

TEST(TimeEvolved, MultipleWithSingleKMatchesSingleBitExactly) {
  RngStream rng(73);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  auto multiple = TimeEvolvedConfig::multiple(4000);
  multiple.k_list = {1};
  multiple.delta_t = 0.7;
  const auto single = TimeEvolvedConfig::single(0.7, 4000);
  RngStream a(9), b(9);
  const auto wa = time_evolved_qsci(single, ints, 8, a);
  const auto wb = time_evolved_qsci(multiple, ints, 8, b);
  EXPECT_EQ(wa.energy, wb.energy);
  EXPECT_EQ(wa.coeffs, wb.coeffs);
}

TEST(TimeEvolved, LargeShotsMatchReachableSupportOracle) {
  RngStream rng(74);
  const auto ints = oracle::random_integrals(3, 2, 1, rng); // 6-qubit toy
  const auto cfg = TimeEvolvedConfig::single(0.3, 2000000);
  RngStream run_rng(3);
  const std::uint64_t sector_size = sector_dimension(3, 2, 1);
  const auto wf = time_evolved_qsci(cfg, ints, sector_size, run_rng);

  // Exhaustive-support oracle: diagonalize over the completion of every
  // sector determinant carrying non-negligible probability in the evolved
  // state.
  const auto h = jordan_wigner(ints);
  const auto state = run_circuit(trotter_circuit(h, 0.3, 1, hf_determinant(ints)));
  DeterminantSet reachable;
  for (const auto &d : enumerate_sector(3, 2, 1))
    if (std::norm(state[d.spin_orbital_bits()]) > 1e-9) reachable.entries[d] = 1.0;
  const auto direct = diagonalize_subspace(symmetry_complete(reachable), ints);
  EXPECT_NEAR(wf.energy, direct.energy, 1e-6);
  EXPECT_GE(wf.energy, direct.energy - 1e-10);
}

TEST(TimeEvolved, ConfigValidation) {
  RngStream rng(75);
  const auto ints = oracle::random_integrals(2, 1, 1, rng);
  auto cfg = TimeEvolvedConfig::single(0.5, 100);
  cfg.delta_t = 0.0;
  RngStream run_rng(1);
  EXPECT_THROW(time_evolved_qsci(cfg, ints, 4, run_rng), std::invalid_argument);
  auto bad = TimeEvolvedConfig::single(0.5, 100);
  bad.k_list = {1, 2};
  EXPECT_THROW(time_evolved_qsci(bad, ints, 4, run_rng), std::invalid_argument);
}

TEST(Sqdrift, ShotSharesConserveBudget) {
  RngStream rng(76);
  const auto ints = oracle::random_integrals(2, 1, 1, rng);
  SqDriftConfig cfg;
  cfg.n_excitations = 5;
  cfg.randomizations = 3;
  cfg.k_list = {1, 2};
  cfg.n_shots = 1000; // 6 circuits: 166 each plus remainder 4 to the first 4
  RngStream run_rng(2);
  const auto hists = sqdrift_histograms(cfg, ints, run_rng);
  ASSERT_EQ(hists.size(), 6u);
  std::uint64_t total = 0;
  for (const auto &h : hists) total += h.n_shots;
  EXPECT_EQ(total, 1000u);
  EXPECT_EQ(hists[0].n_shots, 167u);
  EXPECT_EQ(hists[3].n_shots, 167u);
  EXPECT_EQ(hists[4].n_shots, 166u);
}

TEST(Sqdrift, MergedSupportContainsEveryRandomization) {
  RngStream rng(77);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  SqDriftConfig cfg;
  cfg.n_excitations = 20;
  cfg.randomizations = 8;
  cfg.k_list = {1};
  cfg.n_shots = 8000;
  RngStream run_rng(4);
  const auto hists = sqdrift_histograms(cfg, ints, run_rng);
  ShotHistogram merged;
  for (const auto &h : hists) merged.merge(h);
  for (const auto &h : hists) {
    EXPECT_GE(merged.counts.size(), h.counts.size());
    for (const auto &[k, c] : h.counts) EXPECT_TRUE(merged.counts.count(k));
  }
}

TEST(Sqdrift, SingleTermHamiltonianReducesToExactEvolutionSampling) {
  // With one non-identity term every qDRIFT draw equals the exact evolution,
  // so one randomization reproduces the exactly-evolved sampling pipeline.
  MolecularIntegrals ints(1, 1, 0);
  ints.set_one_body(0, 0, 0.9); // single Z term after mapping (plus identity)
  SqDriftConfig cfg;
  cfg.n_excitations = 7;
  cfg.randomizations = 1;
  cfg.k_list = {1};
  cfg.n_shots = 500;
  RngStream run_rng(5);
  const auto wf = sqdrift_qsci(cfg, ints, 2, run_rng);
  // The evolved state is the HF basis state up to phase; QSCI returns its
  // energy exactly.
  const auto hf = hf_determinant(ints);
  EXPECT_NEAR(wf.energy, slater_condon(hf, hf, ints), 1e-12);
}

TEST(Sqdrift, DeterministicForFixedSeed) {
  RngStream rng(78);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  SqDriftConfig cfg;
  cfg.n_excitations = 15;
  cfg.randomizations = 4;
  cfg.k_list = {1, 2};
  cfg.n_shots = 4000;
  RngStream a(6), b(6);
  EXPECT_EQ(sqdrift_qsci(cfg, ints, 10, a).coeffs, sqdrift_qsci(cfg, ints, 10, b).coeffs);
}

TEST(ExactState, FullBudgetRecoversFci) {
  RngStream rng(79);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  RngStream run_rng(7);
  const auto wf = exact_state_qsci(ints, 300000, sector_dimension(3, 2, 2), run_rng);
  EXPECT_NEAR(wf.energy, e_fci, 1e-6);
  EXPECT_GE(wf.energy, e_fci - 1e-10);
}

TEST(ExactState, DmaxOneKeepsMostProbableDeterminant) {
  RngStream rng(80);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  Determinant top;
  double best = -1.0;
  for (const auto &[d, c] : wf_fci.coeffs)
    if (c * c > best) {
      best = c * c;
      top = d;
    }
  RngStream run_rng(8);
  const auto wf = exact_state_qsci(ints, 200000, 1, run_rng);
  ASSERT_EQ(wf.support_size(), 1u);
  EXPECT_NEAR(wf.energy, slater_condon(top, top, ints), 1e-12);
}

TEST(ExactState, DeterministicForFixedSeed) {
  RngStream rng(81);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  RngStream a(11), b(11);
  EXPECT_EQ(exact_state_qsci(ints, 5000, 4, a).coeffs, exact_state_qsci(ints, 5000, 4, b).coeffs);
}

TEST(Baselines, AllVariational) {
  RngStream rng(82);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  RngStream r1(21), r2(22), r3(23);
  EXPECT_GE(time_evolved_qsci(TimeEvolvedConfig::single(0.5, 20000), ints, 6, r1).energy,
            e_fci - 1e-10);
  SqDriftConfig sq;
  sq.n_excitations = 25;
  sq.randomizations = 5;
  sq.n_shots = 20000;
  EXPECT_GE(sqdrift_qsci(sq, ints, 6, r2).energy, e_fci - 1e-10);
  EXPECT_GE(exact_state_qsci(ints, 20000, 6, r3).energy, e_fci - 1e-10);
}

TEST(Gspgs, ScheduleValues) {
  GspgsSchedule sched;
  EXPECT_NEAR(sched.eta(0), 0.1 / std::pow(11.0, 0.602), 1e-15);
  EXPECT_NEAR(sched.c(0), 0.05, 1e-15);
  EXPECT_GT(sched.eta(100), 0.0);
  EXPECT_GT(sched.c(100), 0.0);
}

TEST(Gspgs, ConstantObjectiveGivesExactlyZeroGradient) {
  RngStream rng(83);
  std::uint64_t evals = 0;
  const auto grad = gspgs_gradient_estimate(
      [](const Eigen::VectorXd &, std::uint64_t) { return 3.5; }, Eigen::VectorXd::Zero(4), 0.05,
      5, rng, evals);
  EXPECT_EQ(evals, 10u);
  for (Eigen::Index i = 0; i < grad.size(); ++i) EXPECT_DOUBLE_EQ(grad(i), 0.0);
}

TEST(Gspgs, QuadraticObjectiveEstimatesTwoTheta) {
  RngStream rng(84);
  Eigen::VectorXd theta(3);
  theta << 0.7, -0.4, 1.1;
  auto objective = [](const Eigen::VectorXd &x, std::uint64_t) { return x.squaredNorm(); };
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  const int draws = 1000; // draws of the 5-perturbation averaged estimator
  std::uint64_t evals = 0;
  for (int k = 0; k < draws; ++k)
    mean += gspgs_gradient_estimate(objective, theta, 0.01, 5, rng, evals);
  mean /= draws;
  const Eigen::VectorXd expected = 2.0 * theta;
  EXPECT_LT((mean - expected).norm() / expected.norm(), 0.05);
}

TEST(Gspgs, ExactEvaluationBudgetPerIteration) {
  RngStream rng(85);
  std::uint64_t calls = 0;
  GspgsSchedule sched;
  sched.iterations = 7;
  auto objective = [&calls](const Eigen::VectorXd &x, std::uint64_t) {
    ++calls;
    return x.squaredNorm();
  };
  gspgs_minimize(objective, Eigen::VectorXd::Ones(4), sched, rng);
  EXPECT_EQ(calls, 7u * 10u);
}

TEST(Gspgs, GradientNormCollapsesUnderTightDeterminantBudget) {
  RngStream rng(86);
  const auto ints = oracle::random_integrals(3, 2, 1, rng, /*with_orb_energies=*/true);
  const auto amps = mp2_amplitudes(ints);
  const auto pool = build_pool(amps, ints.n_qubits());
  ASSERT_GE(pool.size(), 2u);

  std::vector<int> sequence;
  for (int t = 0; t < 4; ++t) sequence.push_back(1 + t % (static_cast<int>(pool.size()) - 1));
  Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(4, 0.05);

  GspgsSchedule sched;
  sched.iterations = 25;
  const std::uint64_t sector = sector_dimension(3, 2, 1);

  RngStream tight_rng(31), loose_rng(31);
  const auto tight = gspgs_optimize(pool, sequence, theta0, sched, ints, 1, 150, tight_rng);
  const auto loose = gspgs_optimize(pool, sequence, theta0, sched, ints, sector, 150, loose_rng);

  auto collapsed_fraction = [](const GspgsResult &r) {
    int n = 0;
    for (const auto &row : r.trace)
      if (row.grad_norm < 1e-10) ++n;
    return static_cast<double>(n) / static_cast<double>(r.trace.size());
  };
  EXPECT_GT(collapsed_fraction(tight), collapsed_fraction(loose));
}
