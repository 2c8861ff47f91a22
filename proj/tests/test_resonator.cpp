#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dressed_modes/resonator.hpp"
#include "oracles.hpp"

using namespace dressed_modes;
constexpr double kPi = std::numbers::pi;

TEST(Resonator, QuarterWaveZeroAndOrigin) {
  const double L = 0.012;
  const double k = kPi / (2.0 * L);
  EXPECT_LT(std::abs(resonator_value(Eigenparameter(k * k), L)), 1e-12 / L);
  EXPECT_EQ(resonator_value(Eigenparameter(0.0), L), 1.0 / L);
}

TEST(Resonator, DivergesWithOppositeSignsAtPole) {
  const double L = 0.012;
  const double p = std::pow(kPi / L, 2);
  const double below = resonator_value(Eigenparameter(p * (1.0 - 1e-6)), L);
  const double above = resonator_value(Eigenparameter(p * (1.0 + 1e-6)), L);
  EXPECT_GT(std::abs(below), 1e5 / L);
  EXPECT_GT(std::abs(above), 1e5 / L);
  EXPECT_LT(below, 0.0);
  EXPECT_GT(above, 0.0);
}

TEST(Resonator, PoleProximityCarriesIndex) {
  const double L = 0.01;
  for (int k = 1; k <= 4; ++k) {
    const double p = std::pow(k * kPi / L, 2);
    try {
      resonator_value(Eigenparameter(p), L);
      FAIL() << "no throw at k=" << k;
    } catch (const PoleProximityError& e) {
      EXPECT_EQ(e.index(), static_cast<std::size_t>(k));
    }
    EXPECT_THROW(resonator_derivative(Eigenparameter(p), L), PoleProximityError);
  }
}

TEST(Resonator, DirichletPolesAndZeros) {
  const auto poles = dirichlet_poles(1.0, 3);
  ASSERT_EQ(poles.size(), 3u);
  EXPECT_NEAR(poles[0].value(), kPi * kPi, 1e-12);
  EXPECT_NEAR(poles[1].value() / poles[0].value(), 4.0, 1e-12);
  EXPECT_NEAR(poles[2].value() / poles[0].value(), 9.0, 1e-12);

  const double L = 0.0037;
  const auto z = quarterwave_zeros(L, 10);
  const auto p = dirichlet_poles(L, 10);
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_LT(z[i].value(), p[i].value());
    if (i > 0) {
      EXPECT_GT(z[i].value(), p[i - 1].value());
    }
  }
  EXPECT_THROW(dirichlet_poles(L, 0), PreconditionError);
  EXPECT_THROW(quarterwave_zeros(-1.0, 2), PreconditionError);
}

TEST(Resonator, SlopeAtZerosIsMinusHalfLength) {
  for (double L : {0.001, 0.012, 0.3}) {
    for (const auto& z : quarterwave_zeros(L, 8)) {
      EXPECT_NEAR(resonator_derivative(z, L) / (-L / 2.0), 1.0, 1e-10);
    }
  }
}

TEST(Resonator, DerivativeMatchesFiniteDifference) {
  const double L = 0.012;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double xi = 0.05 + u(rng) * (5.0 * kPi);
    const double to_pole = std::abs(xi - std::round(xi / kPi) * kPi);
    if (std::round(xi / kPi) >= 1.0 && to_pole < 0.05) continue;
    const double lam = std::pow(xi / L, 2);
    const double h = 1e-5 * std::min(lam, 2.0 * to_pole * lam / xi + 1e-300);
    const double fd =
        oracle::central_difference([&](double x) { return oracle::g_of_lambda(x, L); }, lam, h);
    const double an = resonator_derivative(Eigenparameter(lam), L);
    EXPECT_NEAR(an / fd, 1.0, 1e-6) << "xi=" << xi;
    ++checked;
  }
}

TEST(Resonator, StrictlyDecreasingBetweenPoles) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> len(1e-3, 0.1);
  for (int t = 0; t < 20; ++t) {
    const double L = len(rng);
    for (int k = 0; k < 4; ++k) {
      double prev = INFINITY;
      for (int i = 1; i < 1000; ++i) {
        const double xi = (k + i / 1000.0) * kPi;
        const double lam = std::pow(xi / L, 2);
        const double g = resonator_value(Eigenparameter(lam), L);
        EXPECT_LT(g, prev);
        EXPECT_LT(resonator_derivative(Eigenparameter(lam), L), 0.0);
        prev = g;
      }
    }
  }
}

TEST(Resonator, NearPoleKernelsAgreeWithDirectForm) {
  const double L = 0.0025;
  for (int k = 1; k <= 3; ++k) {
    const double p = std::pow(k * kPi / L, 2);
    for (double rel : {1e-3, -1e-3, 1e-5, -1e-5}) {
      const double off = rel * p;
      EXPECT_NEAR(detail::g_value_near_pole(p, off, L) / detail::g_value(p + off, L), 1.0, 1e-8);
      EXPECT_NEAR(detail::g_derivative_near_pole(p, off, L) / detail::g_derivative(p + off, L),
                  1.0, 1e-8);
    }
  }
}

TEST(Resonator, SmallArgumentDerivative) {
  const double L = 0.5;
  const double lam = 1e-8;
  EXPECT_NEAR(resonator_derivative(Eigenparameter(lam), L) / (-L / 3.0), 1.0, 1e-6);
  EXPECT_THROW(resonator_derivative(Eigenparameter(0.0), L), PreconditionError);
}
