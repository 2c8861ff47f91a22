#include <gtest/gtest.h>

#include <random>

#include "dressed_modes/multiqubit.hpp"

using namespace dressed_modes;

TEST(JointState, Conventions) {
  EXPECT_EQ(sigma_z1(JointState::gg), 1);
  EXPECT_EQ(sigma_z2(JointState::ge), -1);
  EXPECT_EQ(parity(JointState::ge), -1);
  EXPECT_EQ(parity(JointState::ee), 1);
  EXPECT_EQ(qubit1_state(JointState::eg), QubitState::e);
  EXPECT_EQ(qubit2_state(JointState::eg), QubitState::g);
  EXPECT_EQ(to_string(JointState::ee), "ee");
}

TEST(TwoQubitMap, Examples) {
  const TwoQubitDispersiveModel m{5.0, 0.001, 0.001, std::nullopt};
  const auto f = state_frequencies(m);
  EXPECT_DOUBLE_EQ(f[0], 5.002);
  EXPECT_DOUBLE_EQ(f[1], 5.0);
  EXPECT_DOUBLE_EQ(f[2], 5.0);
  EXPECT_DOUBLE_EQ(f[3], 4.998);

  const TwoQubitDispersiveModel u{5.0, 0.001, 0.002, std::nullopt};
  const auto g = state_frequencies(u);
  EXPECT_NEAR(g[1] - g[2], -0.002, 1e-14);
  const auto r = parity_degeneracy_check(u);
  EXPECT_NEAR(r.odd_gap, 0.002, 1e-15);
  EXPECT_FALSE(r.odd_coherence_protected);
}

TEST(TwoQubitMap, SwapSymmetry) {
  const TwoQubitDispersiveModel a{7.0, 0.003, -0.001, std::nullopt};
  const TwoQubitDispersiveModel b{7.0, -0.001, 0.003, std::nullopt};
  EXPECT_DOUBLE_EQ(state_frequency(a, JointState::ge), state_frequency(b, JointState::eg));
  EXPECT_DOUBLE_EQ(state_frequency(a, JointState::gg), state_frequency(b, JointState::gg));
}

TEST(Parity, GapsForMatchedShifts) {
  const TwoQubitDispersiveModel m{6.0, 0.0025, 0.0025, std::nullopt};
  const auto r = parity_degeneracy_check(m);
  EXPECT_EQ(r.odd_gap, 0.0);
  EXPECT_TRUE(r.odd_coherence_protected);
  EXPECT_DOUBLE_EQ(r.even_gap, 4.0 * 0.0025);
  EXPECT_FALSE(r.even_coherence_protected);

  const TwoQubitDispersiveModel p{6.0, 0.0, 0.0, 0.004};
  const auto rp = parity_degeneracy_check(p);
  EXPECT_TRUE(rp.odd_coherence_protected);
  EXPECT_TRUE(rp.even_coherence_protected);
  EXPECT_DOUBLE_EQ(state_frequency(p, JointState::ge), 6.0 - 0.004);
}

TEST(Parity, HamiltonianCommutesWithParityForMatchedShifts) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  for (int t = 0; t < 100; ++t) {
    const double chi = u(rng);
    for (int n : {1, 3, 8}) {
      const TwoQubitDispersiveModel m{5.0 + u(rng), chi, chi, std::nullopt};
      const auto h = dispersive_hamiltonian_matrix(m, n);
      EXPECT_EQ(commutator(h, parity_operator(n)).norm(), 0.0);
    }
  }
  const auto h = dispersive_hamiltonian_matrix({5.0, 0.001, 0.001, std::nullopt}, 1);
  EXPECT_EQ(h.rows(), 8);
  EXPECT_DOUBLE_EQ(h(1, 1), 5.002);
  EXPECT_EQ(h(0, 0), 0.0);
  EXPECT_THROW(dispersive_hamiltonian_matrix({5.0, 0.0, 0.0, std::nullopt}, 0),
               PreconditionError);
}

TEST(Commutators, SingleQubit) {
  const auto c = single_qubit_commutators(0.01, 5);
  EXPECT_EQ(c.h_sz, 0.0);
  EXPECT_GT(c.h_sx, 0.0);
  EXPECT_LT(c.sx_residual, 1e-15);
  const auto zero = single_qubit_commutators(0.0, 5);
  EXPECT_EQ(zero.h_sx, 0.0);
}

namespace {
DeviceParams device() { return DeviceParams::create(0.0025, 1.2e8, 50.0); }
TransmonSpec transmon(double ghz, double g_ghz = 0.1) {
  TransmonSpec q;
  q.omega_q = ghz_to_rad(ghz);
  q.anharmonicity = ghz_to_rad(-0.2);
  q.coupling = ghz_to_rad(g_ghz);
  return q;
}
}  // namespace

TEST(FromBoundaries, IdenticalQubitsHaveMatchedShifts) {
  const auto r = from_two_boundaries(device(), transmon(11.0), transmon(11.0));
  EXPECT_DOUBLE_EQ(r.model.chi1, r.model.chi2);
  EXPECT_GT(r.model.chi1, 0.0);  // map sign: -chi of the single-qubit convention
  EXPECT_NEAR(r.summed_exact[1], r.summed_exact[2], 1e-9 * r.summed_exact[1]);
  // The additive map carries only single-qubit physics; the deviation is
  // second order in the shifts and far below chi itself.
  EXPECT_LT(r.max_deviation_renormalized, 0.1 * r.model.chi1);
}

TEST(FromBoundaries, DecoupledSecondQubitReducesToSingle) {
  const auto dev = device();
  const auto q1 = transmon(11.0);
  const auto r = from_two_boundaries(dev, q1, transmon(10.7, 0.0));
  const auto single = exact_state_frequencies(dev, q1);
  EXPECT_NEAR(r.model.chi2, 0.0, 1e-6);
  EXPECT_NEAR(r.summed_exact[0], single.omega_g, 1e-6);
  EXPECT_NEAR(r.summed_exact[2], single.omega_e, 1e-6);
  EXPECT_LT(r.max_deviation, 1e-3);
}
