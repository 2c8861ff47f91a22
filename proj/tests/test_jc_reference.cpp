#include <gtest/gtest.h>

#include <cmath>

#include "dressed_modes/dispersive.hpp"
#include "dressed_modes/jc_reference.hpp"

using namespace dressed_modes;

namespace {
// Frequencies in GHz; chi comes out in GHz.
JCModel model(int levels, int fock = 10, double detuning = -1.0) {
  JCModel m;
  m.omega_r = 12.0;
  m.omega_q = 12.0 + detuning;
  m.anharmonicity = -0.2;
  m.g = 0.1;
  m.levels = levels;
  m.fock_cutoff = fock;
  return m;
}
}  // namespace

TEST(DressedTwoLevel, Examples) {
  const auto [lo, hi] = dressed_two_level(5.0, 5.0, 0.1);
  EXPECT_DOUBLE_EQ(lo, 4.9);
  EXPECT_DOUBLE_EQ(hi, 5.1);
  const auto [a, b] = dressed_two_level(5.0, 4.0, 0.0);
  EXPECT_DOUBLE_EQ(a, 4.0);
  EXPECT_DOUBLE_EQ(b, 5.0);
  EXPECT_THROW(dressed_two_level(5.0, 4.0, -1.0), PreconditionError);
}

TEST(JCHamiltonian, ConservesExcitationNumber) {
  const auto m = model(3, 6);
  const auto h = build_hamiltonian(m);
  ASSERT_EQ(h.rows(), m.dimension());
  Eigen::MatrixXd n_exc = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (int j = 0; j < m.levels; ++j) {
    for (int n = 0; n <= m.fock_cutoff; ++n) n_exc(m.index(j, n), m.index(j, n)) = j + n;
  }
  EXPECT_LT((h * n_exc - n_exc * h).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(h(m.index(1, 0), m.index(0, 1)), 0.1);
  EXPECT_NEAR(h(m.index(2, 0), m.index(1, 1)), std::sqrt(2.0) * 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(h(m.index(2, 3), m.index(2, 3)), 3 * 12.0 + 2 * 11.0 - 0.2);
}

TEST(Diagonalize, SmallCases) {
  const auto eye = diagonalize(Eigen::MatrixXd::Identity(4, 4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(eye(i), 1.0, 1e-15);
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;
  const auto ev = diagonalize(a);
  EXPECT_NEAR(ev(0), -1.0, 1e-14);
  EXPECT_NEAR(ev(1), 3.0, 1e-14);
  a(0, 1) = 2.5;
  EXPECT_THROW(diagonalize(a), PreconditionError);
}

TEST(ChiNumeric, Regression) {
  EXPECT_NEAR(chi_numeric(model(3)) * 1e3, -1.61207841865, 1e-9);
  EXPECT_NEAR(chi_numeric(model(2)) * 1e3, -9.80762113533, 1e-9);
}

TEST(ChiNumeric, NearClosedForm) {
  const double closed = chi_closed_form(0.1, -0.2, -1.0);
  EXPECT_NEAR(chi_numeric(model(3)) / closed, 1.0, 0.05);
}

TEST(ChiNumeric, FockConvergence) {
  for (int levels : {2, 3}) {
    const auto lo = diagonalize(build_hamiltonian(model(levels, 5)));
    const auto hi = diagonalize(build_hamiltonian(model(levels, 10)));
    // Lowest 2M eigenvalues; the ground state is exactly zero.
    EXPECT_EQ(lo(0), 0.0);
    for (int i = 1; i < 2 * levels; ++i) EXPECT_NEAR(lo(i) / hi(i), 1.0, 1e-10) << i;
  }
  const double ref = chi_numeric(model(3, 10));
  for (int n = 5; n < 10; ++n) EXPECT_NEAR(chi_numeric(model(3, n)) / ref, 1.0, 1e-10) << n;
}

TEST(ChiNumeric, Preconditions) {
  EXPECT_THROW(chi_numeric(model(3, 10, -0.2)), PreconditionError);
  EXPECT_THROW(chi_numeric(model(4)), PreconditionError);
  EXPECT_THROW(chi_numeric(model(3, 1)), PreconditionError);
}

TEST(LabelledEnergy, PicksDominantOverlap) {
  const auto m = model(3, 4);
  const auto es = eigensystem(build_hamiltonian(m));
  EXPECT_NEAR(labelled_energy(es, m, 0, 0), 0.0, 1e-12);
  EXPECT_NEAR(labelled_energy(es, m, 0, 1), 12.0, 0.02);
  EXPECT_NEAR(labelled_energy(es, m, 1, 0), 11.0, 0.02);
}

TEST(LabelledEnergy, AmbiguousMixtureThrows) {
  const auto m = model(2, 2);
  Eigensystem es;
  es.values = Eigen::VectorXd::LinSpaced(m.dimension(), 0.0, 5.0);
  es.vectors = Eigen::MatrixXd::Identity(m.dimension(), m.dimension());
  // Householder reflection on three states: no column holds more than 4/9 of any of them.
  const Eigen::Vector3d u = Eigen::Vector3d::Ones() / std::sqrt(3.0);
  es.vectors.block(0, 0, 3, 3) = Eigen::Matrix3d::Identity() - 2.0 * u * u.transpose();
  EXPECT_THROW(labelled_energy(es, m, 0, 0), LabelAmbiguityError);
  EXPECT_NO_THROW(labelled_energy(es, m, 1, 0));
}

TEST(JCSweep, GapIsEvenInDetuning) {
  const std::vector<double> grid = {11.0, 11.5, 12.0, 12.5, 13.0};
  const auto s = jc_sweep(12.0, 0.1, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(s.points[i].gap(), s.points[grid.size() - 1 - i].gap(), 1e-12);
  }
  EXPECT_NEAR(s.points[2].gap(), 0.2, 1e-12);
}

TEST(CompareWithSL, AgreesInWeakCouplingAndDriftsInStrong) {
  const auto dev = DeviceParams::create(0.0025, 1.2e8, 50.0);
  const double wr = dev.fundamental_omega();
  for (double ratio : {0.01, 0.15}) {
    const double g = ratio * wr;
    TransmonSpec q;
    q.omega_q = wr;
    q.anharmonicity = ghz_to_rad(-0.2);
    q.coupling = g;
    const auto grid = linear_grid(wr - 3.0 * g, wr + 3.0 * g, 41);
    const auto jc = jc_sweep(wr, g, grid);
    const auto sl = sweep_qubit_frequency(dev, q, grid, QubitState::g);
    const auto c = compare_with_sl(jc, sl);
    EXPECT_EQ(c.diff_lo.size(), grid.size());
    const std::size_t mid = grid.size() / 2;
    const double resonance_gap =
        std::abs(c.diff_lo[mid] - c.diff_hi[mid]) / jc.points[mid].gap();
    EXPECT_LT(resonance_gap, ratio == 0.01 ? 0.005 : 0.05) << ratio;
    if (ratio == 0.01) {
      EXPECT_LT(c.max_gap_discrepancy, 0.005);
    }
    EXPECT_LE(c.rms_diff, c.max_abs_diff);
  }
}

TEST(CompareWithSL, DecoupledSweepsAgree) {
  const auto dev = DeviceParams::create(0.0025, 1.2e8, 50.0);
  const double wr = dev.fundamental_omega();
  TransmonSpec q;
  q.omega_q = wr;
  q.anharmonicity = ghz_to_rad(-0.2);
  q.coupling = 0.0;
  const auto grid = linear_grid(0.9 * wr, 0.99 * wr, 5);
  const auto c = compare_with_sl(jc_sweep(wr, 0.0, grid),
                                 sweep_qubit_frequency(dev, q, grid, QubitState::g));
  EXPECT_LT(c.max_abs_diff, 1e-9 * wr);
}

TEST(CompareWithSL, GridMismatch) {
  const auto a = jc_sweep(12.0, 0.1, {11.0, 12.0});
  const auto b = jc_sweep(12.0, 0.1, {11.0});
  const auto c = jc_sweep(12.0, 0.1, {11.0, 12.5});
  EXPECT_THROW(compare_with_sl(a, b), PreconditionError);
  EXPECT_THROW(compare_with_sl(a, c), PreconditionError);
}
