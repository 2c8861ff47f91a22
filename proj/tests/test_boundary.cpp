#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dressed_modes/boundary.hpp"

using namespace dressed_modes;

namespace {
DeviceParams device() { return DeviceParams::create(0.0025, 1.2e8, 50.0); }

TransmonSpec transmon(double ghz = 11.0, double g_ghz = 0.1) {
  TransmonSpec q;
  q.omega_q = ghz_to_rad(ghz);
  q.anharmonicity = ghz_to_rad(-0.2);
  q.coupling = ghz_to_rad(g_ghz);
  return q;
}
}  // namespace

TEST(Residue, SignFollowsTransition) {
  EXPECT_GT(residue_from_g(1e8, 7e10, 0.01, 1.2e8), 0.0);
  EXPECT_LT(residue_from_g(1e8, -7e10, 0.01, 1.2e8), 0.0);
  EXPECT_EQ(residue_from_g(0.0, 7e10, 0.01, 1.2e8), 0.0);
  EXPECT_DOUBLE_EQ(residue_from_g(1e8, -7e10, 0.01, 1.2e8), -residue_from_g(1e8, 7e10, 0.01, 1.2e8));
  const double d = residue_from_g(1e8, 7e10, 0.01, 1.2e8);
  EXPECT_NEAR(residue_from_g(std::numbers::sqrt2 * 1e8, 7e10, 0.01, 1.2e8) / d, 2.0, 1e-14);
  EXPECT_THROW(residue_from_g(1e8, 7e10, 0.0, 1.2e8), PreconditionError);
}

TEST(Residue, ChargeAndCouplingRoutesAgree) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto dev = DeviceParams::create(1e-3 + 0.05 * u(rng), 0.8e8 + 2e8 * u(rng),
                                          20.0 + 80.0 * u(rng));
    const double Q = 1e-20 + 1e-18 * u(rng);
    const double wr = dev.fundamental_omega();
    const double g = g_from_charge(Q, wr, dev.capacitance_per_length(), dev.length());
    const double via_g = residue_from_g(g, wr, dev.length(), dev.velocity());
    const double via_q = residue_from_charge(Q, wr, dev.velocity(), dev.impedance());
    EXPECT_NEAR(via_g / via_q, 1.0, 1e-10);
    EXPECT_NEAR(charge_from_g(g, wr, dev.capacitance_per_length(), dev.length()) / Q, 1.0, 1e-12);
  }
  EXPECT_EQ(residue_from_charge(0.0, 1e10, 1e8, 50.0), 0.0);
  EXPECT_DOUBLE_EQ(residue_from_charge(2e-19, 1e10, 1e8, 50.0),
                   4.0 * residue_from_charge(1e-19, 1e10, 1e8, 50.0));
}

TEST(Residue, CouplingScalesAsRootOmega) {
  const double a = g_from_charge(1e-19, 1e10, 1e-10, 0.01);
  const double b = g_from_charge(1e-19, 4e10, 1e-10, 0.01);
  EXPECT_NEAR(b / a, 2.0, 1e-14);
  EXPECT_THROW(g_from_charge(1e-19, -1.0, 1e-10, 0.01), PreconditionError);
}

TEST(BoundaryForState, GroundStateHasOneAbsorptivePole) {
  const auto dev = device();
  const auto q = transmon();
  const auto b = boundary_for_state(q, dev);
  ASSERT_EQ(b.poles().size(), 1u);
  EXPECT_EQ(b.poles()[0].label, "g->e");
  EXPECT_NEAR(b.poles()[0].location, omega_to_lambda(q.omega_q, dev.velocity()).value(), 1e-6);
  EXPECT_DOUBLE_EQ(b.poles()[0].residue,
                   residue_from_g(*q.coupling, q.omega_q, dev.length(), dev.velocity()));
  EXPECT_EQ(b.beta(), 0.0);
  EXPECT_EQ(b.gamma(), 0.0);
  EXPECT_TRUE(b.residues_nonnegative());
}

TEST(BoundaryForState, ExcitedStateLevels) {
  const auto dev = device();
  const auto q = transmon().with_state(QubitState::e);
  const auto b3 = boundary_for_state(q, dev, 3);
  ASSERT_EQ(b3.poles().size(), 2u);
  // Sorted by location: e->f lies below g->e for negative anharmonicity.
  EXPECT_EQ(b3.poles()[0].label, "e->f");
  EXPECT_EQ(b3.poles()[1].label, "e->g");
  EXPECT_GT(b3.poles()[0].residue, 0.0);
  EXPECT_LT(b3.poles()[1].residue, 0.0);
  EXPECT_NEAR(b3.poles()[0].residue / -b3.poles()[1].residue, 2.0, 0.1);
  EXPECT_FALSE(b3.residues_nonnegative());

  const auto b2 = boundary_for_state(q, dev, 2);
  ASSERT_EQ(b2.poles().size(), 1u);
  EXPECT_LT(b2.poles()[0].residue, 0.0);
  EXPECT_THROW(boundary_for_state(q, dev, 4), PreconditionError);
}

TEST(BoundaryForState, JunctionCapacitanceSetsBeta) {
  const auto dev = device();
  auto q = transmon();
  q.junction_capacitance = 5e-14;
  const auto b = boundary_for_state(q, dev);
  EXPECT_DOUBLE_EQ(b.beta(), 5e-14 / dev.capacitance_per_length());
  EXPECT_GT(b.beta(), 0.0);
}

TEST(RationalBoundary, OpenCircuitIsZero) {
  const auto b = RationalBoundary::open_circuit();
  for (double lam : {0.0, 1.0, 1e6, 1e12}) EXPECT_EQ(b.value(Eigenparameter(lam)), 0.0);
  EXPECT_EQ(b.derivative(Eigenparameter(1.0)), 0.0);
}

TEST(RationalBoundary, DivergesDownwardAboveAbsorptivePole) {
  const auto b = boundary_for_state(transmon(), device());
  const double lq = b.poles()[0].location;
  EXPECT_LT(b.value(Eigenparameter(lq * (1.0 + 1e-7))), -1e3 * std::abs(b.value(Eigenparameter(lq * 0.5))));
  EXPECT_GT(b.value(Eigenparameter(lq * (1.0 - 1e-7))), 0.0);
  EXPECT_THROW(b.value(Eigenparameter(lq)), PoleProximityError);
}

TEST(RationalBoundary, IncreasingForNonnegativeResidues) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    auto q = transmon(8.0 + 6.0 * u(rng), 0.01 + 0.2 * u(rng));
    q.junction_capacitance = 1e-15 + 1e-13 * u(rng);
    const auto b = boundary_for_state(q, device());
    const double lq = b.poles()[0].location;
    for (int i = 1; i < 200; ++i) {
      const double lam = lq * (0.01 + 1.98 * i / 200.0);
      if (std::abs(lam - lq) < 1e-6 * lq) continue;
      EXPECT_GT(b.derivative(Eigenparameter(lam)), 0.0);
      const double h = 1e-3 * std::abs(lam - lq);
      EXPECT_LT(b.value(Eigenparameter(lam - h)), b.value(Eigenparameter(lam + h)));
    }
  }
}

TEST(RationalBoundary, DerivativeMatchesFiniteDifference) {
  const auto b = boundary_for_state(transmon().with_state(QubitState::e), device());
  const double lq = b.poles()[1].location;
  for (double rel : {0.3, 0.9, 0.99, 1.01, 1.2, 2.0}) {
    const double lam = rel * lq;
    const double h = 1e-6 * lam;
    const double fd = (b.value(Eigenparameter(lam + h)) - b.value(Eigenparameter(lam - h))) / (2 * h);
    EXPECT_NEAR(b.derivative(Eigenparameter(lam)) / fd, 1.0, 1e-5) << rel;
  }
}

TEST(RationalBoundary, CreateValidates) {
  EXPECT_THROW(RationalBoundary::create(-1.0, 0.0, {}), PreconditionError);
  EXPECT_THROW(RationalBoundary::create(0.0, -1.0, {}), PreconditionError);
  EXPECT_THROW(RationalBoundary::create(0.0, 0.0, {{-1.0, 1.0, "x"}}), PreconditionError);
  EXPECT_THROW(RationalBoundary::create(0.0, 0.0, {{1.0, 1.0, "a"}, {1.0, 2.0, "b"}}),
               PreconditionError);
  const auto b = RationalBoundary::create(0.0, 0.0, {{5.0, 1.0, "hi"}, {2.0, 1.0, "lo"}});
  EXPECT_EQ(b.poles()[0].label, "lo");
}

TEST(RationalBoundary, ParallelElementsMergeCoincidentPoles) {
  const auto a = RationalBoundary::create(1.0, 0.0, {{4.0, 1.0, "a"}});
  const auto b = RationalBoundary::create(2.0, 0.5, {{4.0, 2.0, "b"}, {9.0, 1.0, "c"}});
  const auto s = a + b;
  EXPECT_EQ(s.beta(), 3.0);
  EXPECT_EQ(s.gamma(), 0.5);
  ASSERT_EQ(s.poles().size(), 2u);
  EXPECT_EQ(s.poles()[0].residue, 3.0);
  EXPECT_EQ(s.poles()[0].label, "a+b");
  const double lam = 6.3;
  EXPECT_NEAR(s.value(Eigenparameter(lam)),
              a.value(Eigenparameter(lam)) + b.value(Eigenparameter(lam)), 1e-12);
}

TEST(AffineBoundary, LinearInLambda) {
  auto q = transmon();
  q.junction_capacitance = 1e-13;
  q.junction_inductance = 1e-9;
  const auto dev = device();
  const auto b = affine_junction_boundary(q, dev);
  EXPECT_TRUE(b.poles().empty());
  EXPECT_DOUBLE_EQ(b.gamma(), dev.inductance_per_length() / 1e-9);
  EXPECT_DOUBLE_EQ(b.value(Eigenparameter(0.0)), -b.gamma());
  EXPECT_THROW(affine_junction_boundary(transmon(), dev), PreconditionError);
}

TEST(ExtendedComponents, Values) {
  const auto b = RationalBoundary::create(0.0, 0.0, {{4.0, 9.0, "a"}, {16.0, -4.0, "b"}});
  const auto xi = extended_components(b, Eigenparameter(10.0), 2.0);
  ASSERT_EQ(xi.size(), 2u);
  EXPECT_DOUBLE_EQ(xi[0], 3.0 * 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(xi[1], 2.0 * 2.0 / -6.0);
  const auto zero = extended_components(b, Eigenparameter(10.0), 0.0);
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_THROW(extended_components(b, Eigenparameter(4.0), 1.0), PoleProximityError);
}

TEST(FullSusceptance, CalibratedMatchesRationalAtReference) {
  const auto dev = device();
  auto q = transmon().with_state(QubitState::e);
  q.junction_capacitance = 2e-14;
  const auto r = boundary_for_state(q, dev);
  const auto ref = dev.fundamental_lambda();
  const auto full = FullSusceptanceBoundary::calibrated(r, ref, dev.inductance_per_length(),
                                                        dev.velocity());
  EXPECT_NEAR(full.value(ref) / r.value(ref), 1.0, 1e-10);
  EXPECT_FALSE(full.residues_nonnegative());
  ASSERT_EQ(full.poles().size(), r.poles().size());
  for (std::size_t i = 0; i < r.poles().size(); ++i) {
    EXPECT_NEAR(full.poles()[i].location / r.poles()[i].location, 1.0, 1e-12);
  }
  // Away from the reference the frozen numerators differ by the factor lambda / lambda_ref.
  for (double rel : {0.95, 1.05}) {
    const Eigenparameter lam(rel * ref.value());
    const double pole_part_full = full.value(lam) - full.junction_capacitance() *
                                                        dev.inductance_per_length() *
                                                        dev.velocity() * dev.velocity() *
                                                        lam.value();
    const double pole_part_rat = r.value(lam) - r.beta() * lam.value();
    EXPECT_NEAR(pole_part_full / pole_part_rat, rel, 1e-10);
  }
  const double h = 1e-6 * ref.value();
  const double fd = (full.value(Eigenparameter(ref.value() + h)) -
                     full.value(Eigenparameter(ref.value() - h))) / (2 * h);
  EXPECT_NEAR(full.derivative(ref) / fd, 1.0, 1e-5);
}

TEST(FullSusceptance, Validates) {
  EXPECT_THROW(FullSusceptanceBoundary::create(-1.0, {}, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(FullSusceptanceBoundary::create(0.0, {{1.0, 0.0, "x"}}, 1.0, 1.0),
               PreconditionError);
  const auto gammaful = RationalBoundary::create(0.0, 1.0, {});
  EXPECT_THROW(FullSusceptanceBoundary::calibrated(gammaful, Eigenparameter(1.0), 1.0, 1.0),
               PreconditionError);
}
