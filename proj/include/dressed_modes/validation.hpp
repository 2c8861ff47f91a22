#pragma once

// End-to-end acceptance checks. Each check reports the measured quantity
// against a tolerance fixed here; `passed` is measured <= tolerance unless
// noted. Random draws come from one std::mt19937_64 per check, seeded from
// the run seed, so a given seed always reproduces the same report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dressed_modes/boundary.hpp"
#include "dressed_modes/dispersive.hpp"
#include "dressed_modes/jc_reference.hpp"
#include "dressed_modes/multimode.hpp"
#include "dressed_modes/multiqubit.hpp"
#include "dressed_modes/params.hpp"
#include "dressed_modes/resonator.hpp"
#include "dressed_modes/spectrum.hpp"
#include "dressed_modes/wedge.hpp"

namespace dressed_modes {

/// Reference device: 2.5 mm line, v = 1.2e8 m/s, 50 ohm; fundamental 12 GHz.
inline DeviceParams standard_device() { return DeviceParams::create(2.5e-3, 1.2e8, 50.0); }

/// Transmon 1 GHz below the standard fundamental, alpha/2pi = -200 MHz,
/// g/2pi = 100 MHz.
inline TransmonSpec standard_transmon() {
  TransmonSpec q;
  q.omega_q = standard_device().fundamental_omega() - ghz_to_rad(1.0);
  q.anharmonicity = ghz_to_rad(-0.2);
  q.coupling = ghz_to_rad(0.1);
  return q;
}

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

namespace detail {

inline CriterionResult finish(CriterionResult r, bool ok) {
  r.passed = ok;
  return r;
}

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

struct InterlacingCampaign {
  std::size_t runs = 0;
  std::size_t failures = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string first_failure;
};

// Random ground-state devices: L in [5, 30] mm, v in [0.8, 1.5]e8 m/s,
// g / omega_r in [0.001, 0.2], transition inside one of the first three
// Dirichlet gaps.
inline InterlacingCampaign interlacing_campaign(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  InterlacingCampaign c;
  for (std::size_t i = 0; i < count; ++i) {
    const double length = 5e-3 + 25e-3 * u(rng);
    const double v = 0.8e8 + 0.7e8 * u(rng);
    const double ratio = 0.001 + 0.199 * u(rng);
    const int gap = static_cast<int>(3.0 * u(rng));
    const double xi = std::numbers::pi * (gap + 0.01 + 0.98 * u(rng));
    const auto dev = DeviceParams::create(length, v, 50.0);
    TransmonSpec q;
    q.omega_q = v * xi / length;
    q.anharmonicity = ghz_to_rad(-0.2);
    q.coupling = ratio * dev.fundamental_omega();
    ++c.runs;
    try {
      const auto b = boundary_for_state(q, dev, 3);
      const ResonatorFunction res(length);
      const auto s = find_eigenvalues(res, b);
      for (const auto& iv : s.intervals) {
        if (!iv.interlacing_satisfied) throw InterlacingError("interval", iv.lo, iv.hi, iv.root_count);
      }
      for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) {
        if (!(s.eigenvalues[k].lambda > s.eigenvalues[k - 1].lambda)) {
          throw SolverError("eigenvalues not strictly increasing");
        }
      }
      c.min_margin = std::min(c.min_margin, level_repulsion_margin(s, b));
    } catch (const Error& e) {
      if (c.failures++ == 0) c.first_failure = "draw " + std::to_string(i) + ": " + e.what();
    }
  }
  return c;
}

}  // namespace detail

using detail::num;

inline CriterionResult check_open_circuit() {
  CriterionResult r{1, "open-circuit reduction", false, 0.0, 1e-10, ""};
  const auto dev = standard_device();
  const ResonatorFunction res(dev.length());
  const auto s = find_eigenvalues(res, RationalBoundary::open_circuit());
  const auto zeros = quarterwave_zeros(dev.length(), 5);
  if (s.eigenvalues.size() < 5) {
    r.detail = "fewer than 5 eigenvalues";
    return r;
  }
  for (int k = 0; k < 5; ++k) {
    r.measured = std::max(r.measured, detail::rel(s.eigenvalues[k].lambda, zeros[k].value()));
  }
  r.detail = "max relative deviation over first 5 roots";
  return detail::finish(r, r.measured <= r.tolerance);
}

inline CriterionResult check_derivative_identity(std::uint64_t seed) {
  CriterionResult r{2, "resonator derivative identity", false, 0.0, 1.0, ""};
  const double length = standard_device().length();
  double zero_err = 0.0;
  for (const auto& z : quarterwave_zeros(length, 5)) {
    zero_err = std::max(zero_err, detail::rel(resonator_derivative(z, length), -0.5 * length));
  }
  std::mt19937_64 rng(seed ^ 0x2ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double fd_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // xi = sqrt(lambda) L at least 0.05 from every pole kpi.
    const int k = static_cast<int>(6.0 * u(rng));
    const double xi = std::numbers::pi * k + 0.05 + (std::numbers::pi - 0.1) * u(rng);
    const double lam = (xi / length) * (xi / length);
    const double dist = std::min(xi - std::numbers::pi * k, std::numbers::pi * (k + 1) - xi);
    const double h = 1e-4 * dist * 2.0 * xi / (length * length);
    const double fd = (resonator_value(Eigenparameter(lam + h), length) -
                       resonator_value(Eigenparameter(lam - h), length)) / (2.0 * h);
    fd_err = std::max(fd_err, detail::rel(resonator_derivative(Eigenparameter(lam), length), fd));
  }
  r.measured = std::max(zero_err / 1e-12, fd_err / 1e-6);
  r.detail = "G'(zero) rel err " + num(zero_err) + " (tol 1e-12), FD rel err " +
             num(fd_err) + " (tol 1e-6); measured = worst ratio";
  return detail::finish(r, r.measured <= 1.0);
}

inline CriterionResult check_interlacing(std::uint64_t seed) {
  CriterionResult r{3, "interlacing", false, 0.0, 0.0, ""};
  const auto c = detail::interlacing_campaign(seed ^ 0x3ULL, 1000);
  r.measured = static_cast<double>(c.failures);
  r.detail = std::to_string(c.runs) + " random ground-state devices" +
             (c.failures ? "; first failure " + c.first_failure : "");
  return detail::finish(r, c.failures == 0);
}

inline CriterionResult check_level_repulsion(std::uint64_t seed) {
  CriterionResult r{4, "level repulsion", false, 0.0, 0.0, ""};
  const auto c = detail::interlacing_campaign(seed ^ 0x3ULL, 1000);
  const auto dev = standard_device();
  const double wr = dev.fundamental_omega();
  auto q = standard_transmon();
  q.coupling = 0.01 * wr;
  const auto grid = linear_grid(wr - 10.0 * *q.coupling, wr + 10.0 * *q.coupling, 201);
  double min_gap = std::numeric_limits<double>::infinity();
  bool sweep_ok = true;
  try {
    for (const auto& p : sweep_qubit_frequency(dev, q, grid, QubitState::g).points) {
      min_gap = std::min(min_gap, p.gap());
    }
  } catch (const Error& e) {
    sweep_ok = false;
    r.detail = std::string("sweep failed: ") + e.what() + "; ";
  }
  r.measured = std::min(c.min_margin, min_gap / wr);
  r.detail += "min eigenvalue-pole margin " + num(c.min_margin) +
              ", min sweep gap / omega_r " + num(min_gap / wr) +
              " (measured = smaller; must be > 0)";
  return detail::finish(r, sweep_ok && c.failures == 0 && c.min_margin > 0.0 && min_gap > 0.0);
}

inline CriterionResult check_vacuum_rabi() {
  CriterionResult r{5, "vacuum Rabi matching", false, 0.0, 1.0, ""};
  const auto dev = standard_device();
  auto q = standard_transmon();
  q.omega_q = dev.fundamental_omega();
  double worst = 0.0;
  std::string detail;
  for (const auto& [ratio, tol] : {std::pair{0.01, 0.005}, std::pair{0.15, 0.05}}) {
    q.coupling = ratio * dev.fundamental_omega();
    const auto s = rabi_splitting(dev, q);
    const double dev_rel = std::abs(s.measured / (2.0 * s.coupling) - 1.0);
    worst = std::max(worst, dev_rel / tol);
    detail += "g/omega_r=" + num(ratio) + ": gap/2g-1 = " +
              num(s.measured / (2.0 * s.coupling) - 1.0) + " (tol " +
              num(tol) + "); ";
  }
  r.measured = worst;
  r.detail = detail + "measured = worst ratio to tolerance";
  return detail::finish(r, worst <= 1.0);
}

inline CriterionResult check_dispersive_triangle(std::uint64_t seed) {
  CriterionResult r{6, "dispersive-shift triangle", false, 0.0, 1.0, ""};
  const auto dev = standard_device();
  const double wr = dev.fundamental_omega();
  std::mt19937_64 rng(seed ^ 0x6ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::string worst_detail;
  for (int i = 0; i < 50; ++i) {
    const double alpha = ghz_to_rad(-0.3 + 0.2 * u(rng));
    const double delta = ghz_to_rad(-2.0 + 1.6 * u(rng));
    const double ratio = 0.01 + 0.09 * u(rng);
    TransmonSpec q;
    q.omega_q = wr + delta;
    q.anharmonicity = alpha;
    q.coupling = ratio * std::abs(delta);
    const double closed = chi_closed_form(*q.coupling, alpha, delta);
    const double sl = chi_from_spectrum(dev, q, 3);
    const double jc = chi_numeric({wr, q.omega_q, alpha, *q.coupling, 3, 10});
    const double tol = std::max(0.02, 5.0 * ratio * ratio);
    const double spread = std::max({std::abs(closed - sl), std::abs(closed - jc),
                                    std::abs(sl - jc)}) / std::abs(closed);
    if (spread / tol > worst) {
      worst = spread / tol;
      worst_detail = "worst draw " + std::to_string(i) + ": spread " + num(spread) +
                     " vs tol " + num(tol);
    }
  }
  r.measured = worst;
  r.detail = worst_detail + "; measured = worst spread / max(2%, 5 (g/Delta)^2)";
  return detail::finish(r, worst <= 1.0);
}

inline CriterionResult check_multimode() {
  CriterionResult r{7, "multimode divergences", false, 0.0, 1.0, ""};
  const auto dev = standard_device();
  MultimodeModel m;
  m.omega_1 = dev.fundamental_omega();
  m.g1 = ghz_to_rad(0.1);
  m.omega_q = m.omega_1 - ghz_to_rad(1.0);
  m.anharmonicity = ghz_to_rad(-0.2);
  const auto rep = divergence_report(m, {100, 200, 400, 800});
  double ratio_err = 0.0;
  for (double q : rep.increment_ratios) ratio_err = std::max(ratio_err, std::abs(q - 1.0));
  const double r2_short = 1.0 - rep.lamb_fit.r_squared;
  r.measured = std::max(r2_short / 1e-3, ratio_err / 0.10);
  r.detail = "Lamb R^2 " + num(rep.lamb_fit.r_squared) + " (need > 0.999), chi " +
             "doubling-increment ratio deviation " + num(ratio_err) +
             " (tol 0.10); measured = worst ratio";
  return detail::finish(r, rep.lamb_fit.r_squared > 0.999 && ratio_err <= 0.10);
}

inline CriterionResult check_two_qubit(std::uint64_t seed) {
  CriterionResult r{8, "two-qubit structure", false, 0.0, 1.0, ""};
  const auto dev = standard_device();
  const double wr = dev.fundamental_omega();
  const auto q1 = standard_transmon();
  const auto matched = from_two_boundaries(dev, q1, q1);
  const auto rep = parity_degeneracy_check(matched.model);
  const double chi = matched.model.chi1;
  const bool gaps_exact = matched.model.chi1 == matched.model.chi2 && rep.odd_gap == 0.0 &&
                          rep.even_gap == 4.0 * std::abs(chi);

  std::mt19937_64 rng(seed ^ 0x8ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TwoQubitDispersiveModel rnd{wr, ghz_to_rad(0.01) * u(rng), ghz_to_rad(0.01) * u(rng), {}};
  const auto h = dispersive_hamiltonian_matrix(rnd, 10);
  const double comm = commutator(h, parity_operator(10)).norm() / h.norm();

  auto q2 = q1;
  q2.omega_q = wr - ghz_to_rad(1.3);
  const auto distinct = from_two_boundaries(dev, q1, q2);
  const double chi_max = std::max(std::abs(distinct.model.chi1), std::abs(distinct.model.chi2));
  const double bound = 10.0 * chi_max * chi_max / wr;
  const double additivity = distinct.max_deviation_renormalized / bound;

  r.measured = additivity;
  r.detail = std::string("matched gaps exact: ") + (gaps_exact ? "yes" : "no") +
             "; ||[H,P]||/||H|| = " + num(comm) + " (tol 1e-14)" +
             "; additive-map deviation " + num(rad_to_hz(distinct.max_deviation_renormalized)) +
             " Hz vs 10 chi^2/omega_r = " + num(rad_to_hz(bound)) +
             " Hz (measured = ratio)";
  return detail::finish(r, gaps_exact && comm <= 1e-14 && additivity <= 1.0);
}

inline CriterionResult check_commutators() {
  CriterionResult r{9, "commutator algebra", false, 0.0, 1e-14, ""};
  const double chi = ghz_to_rad(0.0017);
  const auto c = single_qubit_commutators(chi, 5);
  r.measured = std::max(c.h_sz, c.sx_residual) / c.h_sx;
  r.detail = "||[H,sz]|| = " + num(c.h_sz) + ", identity residual " +
             num(c.sx_residual) + ", ||[H,sx]|| = " + num(c.h_sx) +
             " (measured relative to ||[H,sx]||)";
  return detail::finish(r, r.measured <= r.tolerance && c.h_sx > 0.0);
}

inline CriterionResult check_approximation_audit() {
  CriterionResult r{10, "rational vs full susceptance", false, 0.0, 0.01, ""};
  const auto dev = standard_device();
  const double wr = dev.fundamental_omega();
  const double v = dev.velocity();
  const auto rational = boundary_for_state(standard_transmon(), dev, 3);
  const auto full = FullSusceptanceBoundary::calibrated(
      rational, dev.fundamental_lambda(), dev.inductance_per_length(), v);
  const ResonatorFunction res(dev.length());
  const auto a = find_eigenvalues(res, rational).omegas(v);
  const auto b = find_eigenvalues(res, full).omegas(v);
  std::vector<double> wa, wb;
  for (double w : a) if (std::abs(w - wr) <= 0.05 * wr) wa.push_back(w);
  for (double w : b) if (std::abs(w - wr) <= 0.05 * wr) wb.push_back(w);
  if (wa.empty() || wa.size() != wb.size()) {
    r.detail = "mode counts within 5% of omega_r differ";
    return r;
  }
  for (std::size_t i = 0; i < wa.size(); ++i) r.measured = std::max(r.measured, detail::rel(wb[i], wa[i]));
  r.detail = std::to_string(wa.size()) + " mode(s) within 5% of omega_r; max relative deviation";
  return detail::finish(r, r.measured <= r.tolerance);
}

inline CriterionResult check_wedge() {
  CriterionResult r{11, "wedge modes", false, 0.0, 1e-9, ""};
  const auto geom = WedgeGeometry::create(2.0 * std::numbers::pi / 3.0);
  bool mu_exact = true;
  for (int n = 1; n <= 5; ++n) {
    mu_exact = mu_exact && wedge_mu(n, geom) == n * std::numbers::pi / geom.angle();
  }
  double ortho = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (int m = n + 1; m <= 5; ++m) {
      ortho = std::max(ortho, std::abs(wedge_mode_overlap(n, m, geom)));
    }
  }
  const auto viol = lz_domain_violation(1, geom);
  r.measured = ortho;
  r.detail = std::string("mu exact: ") + (mu_exact ? "yes" : "no") +
             "; max off-diagonal overlap " + num(ortho) +
             "; Lz residual at phi=0: " + num(viol.first);
  return detail::finish(r, mu_exact && ortho <= r.tolerance && viol.first == 1.0);
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  return {check_open_circuit(),
          check_derivative_identity(seed),
          check_interlacing(seed),
          check_level_repulsion(seed),
          check_vacuum_rabi(),
          check_dispersive_triangle(seed),
          check_multimode(),
          check_two_qubit(seed),
          check_commutators(),
          check_approximation_audit(),
          check_wedge()};
}

}  // namespace dressed_modes
