#include <gtest/gtest.h>

#include <cmath>

#include "dressed_modes/multimode.hpp"

using namespace dressed_modes;

namespace {
MultimodeModel model(int n_max = 1) {
  MultimodeModel m;
  m.omega_1 = 12.0;
  m.g1 = 0.1;
  m.omega_q = 11.0;
  m.anharmonicity = -0.2;
  m.n_max = n_max;
  return m;
}
}  // namespace

TEST(Multimode, SingleModeSums) {
  const auto m = model(1);
  EXPECT_DOUBLE_EQ(lamb_shift_sum(m), 0.01 / -1.0);
  EXPECT_DOUBLE_EQ(chi_sum(m), 0.01 * -0.2 / (-1.0 * -1.2));
  EXPECT_DOUBLE_EQ(renormalize_bare_frequency(11.0, m), 11.0 + 0.01);
}

TEST(Multimode, CouplingGrowsWithModeFrequency) {
  const auto m = model();
  for (int n = 1; n <= 50; ++n) {
    EXPECT_NEAR(m.coupling(n) * m.coupling(n), m.coupling_squared(n), 1e-15 * n);
    EXPECT_NEAR(m.coupling_squared(n) / m.mode_frequency(n), m.g1 * m.g1 / m.omega_1, 1e-15);
  }
  EXPECT_DOUBLE_EQ(m.mode_frequency(3), 60.0);
}

TEST(Multimode, LambSummandApproachesConstant) {
  const auto m = model();
  const double limit = -m.g1 * m.g1 / m.omega_1;
  EXPECT_NEAR(lamb_summand(m, 100000) / limit, 1.0, 1e-4);
}

TEST(Multimode, ChiTermsFallAsOneOverN) {
  const auto m = model();
  const double limit = m.g1 * m.g1 * m.anharmonicity / (m.omega_1 * m.omega_1);
  for (int n : {1000, 10000, 100000}) {
    EXPECT_NEAR((2.0 * n - 1.0) * chi_term(m, n) / limit, 1.0, 2.0 / n) << n;
  }
}

TEST(Multimode, DivergenceReport) {
  const auto r = divergence_report(model(), {100, 200, 400, 800, 1600});
  EXPECT_GT(r.lamb_fit.r_squared, 0.999);
  EXPECT_LT(r.lamb_fit.slope, 0.0);
  EXPECT_FALSE(r.chi_degenerate);
  ASSERT_EQ(r.chi_increments.size(), 4u);
  ASSERT_EQ(r.increment_ratios.size(), 3u);
  for (double q : r.increment_ratios) EXPECT_NEAR(q, 1.0, 0.1);
  // Asymptotically each doubling adds (g1^2 alpha / omega_1^2) ln(2) / 2.
  const double expected = 0.5 * std::log(2.0) * 0.01 * -0.2 / 144.0;
  EXPECT_NEAR(r.chi_increments.back() / expected, 1.0, 0.01);
}

TEST(Multimode, DecoupledIsDegenerate) {
  auto m = model();
  m.g1 = 0.0;
  const auto r = divergence_report(m, {1, 2, 4, 8});
  EXPECT_TRUE(r.chi_degenerate);
  EXPECT_EQ(r.lamb.back(), 0.0);
  EXPECT_EQ(lamb_shift_sum(m), 0.0);
}

TEST(Multimode, LineFit) {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
  EXPECT_THROW(fit_line({1, 1}, {2, 3}), PreconditionError);
}

TEST(Multimode, CompensatedSumBeatsNaive) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}

TEST(Multimode, Preconditions) {
  auto m = model(5);
  m.omega_q = m.mode_frequency(3);
  EXPECT_THROW(lamb_shift_sum(m), PreconditionError);
  m = model(5);
  m.omega_q = m.mode_frequency(2) - m.anharmonicity;
  EXPECT_THROW(chi_sum(m), PreconditionError);
  EXPECT_THROW(divergence_report(model(), {1, 2, 3}), PreconditionError);
  m = model(0);
  EXPECT_THROW(lamb_shift_sum(m), PreconditionError);
}
