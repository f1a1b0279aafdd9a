/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>

#include "qsci/qsci.hpp"
#include "support/random_systems.hpp"

using namespace qsci;

namespace {

Determinant random_sector_determinant(int n_orb, int n_alpha, int n_beta, RngStream &rng) {
  auto pick = [&](int k) {
    std::uint64_t bits = 0;
    while (std::popcount(bits) < k) bits |= 1ULL << rng.uniform_int(static_cast<std::uint64_t>(n_orb));
    return bits;
  };
  return {pick(n_alpha), pick(n_beta)};
}

} // namespace

TEST(Select, FiltersOutOfSectorStrings) {
  ShotHistogram hist;
  const Determinant in_sector{0b011, 0b001};  // 2 alpha, 1 beta
  const Determinant off_sector{0b111, 0b000}; // 3 alpha, 0 beta
  hist.counts[in_sector.spin_orbital_bits()] = 7;
  hist.counts[off_sector.spin_orbital_bits()] = 5;
  hist.n_shots = 12;
  const auto set = select_determinants(hist, {2, 1});
  ASSERT_EQ(set.size(), 1u);
  EXPECT_TRUE(set.contains(in_sector));
  EXPECT_DOUBLE_EQ(set.entries.at(in_sector), 7.0);
}

TEST(Select, AllOutOfSectorGivesEmptySet) {
  ShotHistogram hist;
  hist.counts[Determinant{0b1, 0b0}.spin_orbital_bits()] = 3;
  hist.n_shots = 3;
  EXPECT_EQ(select_determinants(hist, {0, 1}).size(), 0u);
}

TEST(SymmetryComplete, AddsMissingOpenShellPartner) {
  // Occupation pattern (2, up, down, 0) over four orbitals.
  const Determinant seed{0b0011, 0b0101};
  DeterminantSet set;
  set.entries[seed] = 4.0;
  const auto out = symmetry_complete(set);
  const Determinant partner{0b0101, 0b0011}; // (2, down, up, 0)
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out.contains(seed));
  EXPECT_TRUE(out.contains(partner));
  EXPECT_DOUBLE_EQ(out.entries.at(partner), 4.0);
}

TEST(SymmetryComplete, ClosedShellUnchanged) {
  const Determinant closed{0b0011, 0b0011};
  DeterminantSet set;
  set.entries[closed] = 2.0;
  const auto out = symmetry_complete(set);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out.contains(closed));
}

TEST(SymmetryComplete, ClassSizeIsBinomial) {
  // Four open shells with two alpha electrons: C(4, 2) = 6 members.
  const Determinant seed{0b0011, 0b1100};
  DeterminantSet set;
  set.entries[seed] = 1.0;
  const auto out = symmetry_complete(set);
  EXPECT_EQ(out.size(), 6u);
  for (const auto &[d, w] : out.entries) {
    EXPECT_EQ(d.n_alpha(), 2);
    EXPECT_EQ(d.n_beta(), 2);
    EXPECT_EQ(d.alpha & d.beta, 0ULL);
    EXPECT_EQ(d.alpha | d.beta, 0b1111ULL);
  }
}

TEST(SymmetryComplete, ClassSizeLawOnRandomDeterminants) {
  RngStream rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n_orb = 3 + static_cast<int>(rng.uniform_int(6));
    const auto d = random_sector_determinant(
        n_orb, 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_orb))),
        static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_orb))), rng);
    const std::uint64_t open = d.alpha ^ d.beta;
    const int m = std::popcount(open);
    const int na_open = std::popcount(d.alpha & open);
    DeterminantSet set;
    set.entries[d] = 1.0;
    EXPECT_EQ(symmetry_complete(set).size(), binomial(m, na_open));
  }
}

TEST(SymmetryComplete, Idempotent) {
  RngStream rng(32);
  DeterminantSet set;
  for (int k = 0; k < 10; ++k)
    set.entries[random_sector_determinant(6, 3, 2, rng)] = 1.0 + rng.uniform_int(50);
  const auto once = symmetry_complete(set);
  const auto twice = symmetry_complete(once);
  EXPECT_EQ(once.entries, twice.entries);
}

TEST(SymmetryComplete, MultipleSeedsTakeMaximumFrequency) {
  const Determinant a{0b01, 0b10}, b{0b10, 0b01}; // same class
  DeterminantSet set;
  set.entries[a] = 3.0;
  set.entries[b] = 9.0;
  const auto out = symmetry_complete(set);
  EXPECT_DOUBLE_EQ(out.entries.at(a), 9.0);
  EXPECT_DOUBLE_EQ(out.entries.at(b), 9.0);
}

TEST(Truncate, NoOpWhenSmall) {
  DeterminantSet set;
  set.entries[{0b01, 0b01}] = 2.0;
  set.entries[{0b10, 0b01}] = 1.0;
  const auto out = truncate(set, 5);
  EXPECT_EQ(out.entries, set.entries);
}

TEST(Truncate, TiesBreakByCanonicalOrder) {
  DeterminantSet set;
  set.entries[{0b100, 0b001}] = 1.0;
  set.entries[{0b001, 0b100}] = 1.0;
  set.entries[{0b010, 0b010}] = 1.0;
  const auto out = truncate(set, 2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out.contains({0b001, 0b100}));
  EXPECT_TRUE(out.contains({0b010, 0b010}));
}

TEST(Truncate, KeepsMostFrequent) {
  DeterminantSet set;
  set.entries[{0b01, 0b01}] = 2.0;
  set.entries[{0b10, 0b10}] = 10.0;
  const auto out = truncate(set, 1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out.contains({0b10, 0b10}));
}

TEST(Diagonalize, SingleHfDeterminantGivesHfEnergy) {
  RngStream rng(33);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  DeterminantSet set;
  const auto hf = hf_determinant(ints);
  set.entries[hf] = 1.0;
  const auto wf = diagonalize_subspace(set, ints);
  EXPECT_NEAR(wf.energy, slater_condon(hf, hf, ints), 1e-12);
  EXPECT_NEAR(wf.coefficient(hf), 1.0, 1e-12);
}

TEST(Diagonalize, FullSectorMatchesFci) {
  RngStream rng(34);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  DeterminantSet set;
  for (const auto &d : enumerate_sector(3, 2, 2)) set.entries[d] = 1.0;
  const auto wf = diagonalize_subspace(set, ints);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  EXPECT_NEAR(wf.energy, e_fci, 1e-9);
}

TEST(Diagonalize, RayleighRitzMonotoneUnderNesting) {
  RngStream rng(35);
  const auto ints = oracle::random_integrals(4, 2, 2, rng);
  const auto sector = enumerate_sector(4, 2, 2);
  DeterminantSet small, large;
  for (std::size_t i = 0; i < sector.size(); ++i) {
    if (i < 8) small.entries[sector[i]] = 1.0;
    if (i < 20) large.entries[sector[i]] = 1.0;
  }
  EXPECT_GE(diagonalize_subspace(small, ints).energy,
            diagonalize_subspace(large, ints).energy - 1e-10);
}

TEST(Diagonalize, EmptySetThrows) {
  RngStream rng(36);
  const auto ints = oracle::random_integrals(2, 1, 1, rng);
  EXPECT_THROW(diagonalize_subspace(DeterminantSet{}, ints), std::invalid_argument);
}

TEST(QsciEnergy, HfBasisStateGivesHfEnergy) {
  RngStream rng(37);
  const auto ints = oracle::random_integrals(3, 2, 1, rng);
  const auto hf = hf_determinant(ints);
  const auto state = Statevector::basis_state(ints.n_qubits(), hf.spin_orbital_bits());
  RngStream stream(1);
  const auto wf = qsci_energy(state, 500, 10, ints, stream);
  EXPECT_NEAR(wf.energy, slater_condon(hf, hf, ints), 1e-12);
}

TEST(QsciEnergy, ExactStateLargeShotsRecoversFci) {
  RngStream rng(38);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  // Build the FCI state as a statevector and sample it heavily.
  Statevector state(ints.n_qubits());
  for (const auto &[d, c] : wf_fci.coeffs) state[d.spin_orbital_bits()] = c;
  RngStream stream(2);
  const auto wf = qsci_energy(state, 200000, sector_dimension(3, 2, 2), ints, stream);
  EXPECT_NEAR(wf.energy, e_fci, 1e-6);
  EXPECT_GE(wf.energy, e_fci - 1e-10);
}

TEST(QsciEnergy, DeterministicForFixedSeed) {
  RngStream rng(39);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  Statevector state(ints.n_qubits());
  for (const auto &[d, c] : wf_fci.coeffs) state[d.spin_orbital_bits()] = c;
  RngStream a(7), b(7);
  const auto wa = qsci_energy(state, 2000, 5, ints, a);
  const auto wb = qsci_energy(state, 2000, 5, ints, b);
  EXPECT_EQ(wa.energy, wb.energy);
  EXPECT_EQ(wa.coeffs, wb.coeffs);
}

TEST(QsciEnergy, VariationalAndMonotoneInDmax) {
  RngStream rng(40);
  const auto ints = oracle::random_integrals(3, 2, 2, rng);
  const auto [e_fci, wf_fci] = fci_ground_state(ints);
  Statevector state(ints.n_qubits());
  for (const auto &[d, c] : wf_fci.coeffs) state[d.spin_orbital_bits()] = c;

  double previous = 1e300;
  for (const std::size_t d_max : {1u, 2u, 4u, 8u, 16u}) {
    RngStream stream(11); // same histogram in every pass
    const auto wf = qsci_energy(state, 5000, d_max, ints, stream);
    EXPECT_GE(wf.energy, e_fci - 1e-10);
    EXPECT_LE(wf.energy, previous + 1e-10);
    EXPECT_LE(wf.support_size(), d_max);
    previous = wf.energy;
  }
}
