#pragma once

// Sums over the quarter-wave ladder omega_n = (2n - 1) omega_1 with
// couplings g_n = g_1 sqrt(omega_n / omega_1), so g_n^2 / omega_n is the
// same for every mode.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dressed_modes/dispersive.hpp"
#include "dressed_modes/errors.hpp"

namespace dressed_modes {

inline constexpr double kResonantModeGuard = 1e-6;

struct MultimodeModel {
  double omega_1 = 0.0;  // fundamental, rad/s
  double g1 = 0.0;       // coupling to mode 1, rad/s
  double omega_q = 0.0;
  double anharmonicity = 0.0;
  int n_max = 1;

  double mode_frequency(int n) const { return (2.0 * n - 1.0) * omega_1; }
  double coupling(int n) const { return g1 * std::sqrt(mode_frequency(n) / omega_1); }
  double coupling_squared(int n) const { return g1 * g1 * (2.0 * n - 1.0); }

  void validate() const {
    if (!(omega_1 > 0.0)) throw PreconditionError("fundamental must be positive");
    if (!(g1 >= 0.0)) throw PreconditionError("coupling must be >= 0");
    if (n_max < 1) throw PreconditionError("n_max must be >= 1");
  }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {
inline void require_off_resonant(double omega, double target, int n, const char* what) {
  if (std::abs(omega - target) <= kResonantModeGuard * std::abs(target)) {
    throw PreconditionError(std::string("mode ") + std::to_string(n) +
                            " is resonant with " + what);
  }
}
}  // namespace detail

/// g_n^2 / (omega_q - omega_n).
inline double lamb_summand(const MultimodeModel& m, int n) {
  return m.coupling_squared(n) / (m.omega_q - m.mode_frequency(n));
}

/// sum_{n <= N_max} g_n^2 / (omega_q - omega_n), ascending n.
inline double lamb_shift_sum(const MultimodeModel& m) {
  m.validate();
  CompensatedSum s;
  for (int n = 1; n <= m.n_max; ++n) {
    detail::require_off_resonant(m.mode_frequency(n), m.omega_q, n, "the qubit");
    s.add(lamb_summand(m, n));
  }
  return s.value();
}

/// Bare frequency whose first-order dressed value is `omega_q_physical`.
inline double renormalize_bare_frequency(double omega_q_physical,
                                         const MultimodeModel& m) {
  return omega_q_physical - lamb_shift_sum(m);
}

/// chi_n = g_n^2 alpha / (Delta_n (Delta_n + alpha)), Delta_n = omega_q - omega_n.
inline double chi_term(const MultimodeModel& m, int n) {
  const double d = m.omega_q - m.mode_frequency(n);
  return m.coupling_squared(n) * m.anharmonicity / (d * (d + m.anharmonicity));
}

inline double chi_sum(const MultimodeModel& m) {
  m.validate();
  CompensatedSum s;
  for (int n = 1; n <= m.n_max; ++n) {
    const double w = m.mode_frequency(n);
    detail::require_off_resonant(w, m.omega_q, n, "the g-e transition");
    detail::require_off_resonant(w, m.omega_q + m.anharmonicity, n, "the e-f transition");
    s.add(chi_term(m, n));
  }
  return s.value();
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;  // zero variance in y: no trend to fit
};

/// Ordinary least squares y = a x + b.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("line fit needs >= 2 matched points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  if (sxx == 0.0) throw PreconditionError("line fit needs distinct abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0.0) {
    f.degenerate = true;
    return f;
  }
  f.r_squared = sxy * sxy / (sxx * syy);
  return f;
}

struct DivergenceReport {
  std::vector<int> cutoffs;
  std::vector<double> lamb;  // partial sums, rad/s
  std::vector<double> chi;
  LinearFit lamb_fit;                // lamb vs N_max
  std::vector<double> chi_increments;       // chi(N_{i+1}) - chi(N_i)
  std::vector<double> increment_ratios;     // consecutive increment ratios
  bool chi_degenerate = false;              // every chi partial sum is zero
};

/// Partial sums at each cutoff. A doubling schedule makes the chi
/// increments constant for a logarithmic divergence.
inline DivergenceReport divergence_report(MultimodeModel m, const std::vector<int>& schedule) {
  if (schedule.size() < 4) throw PreconditionError("schedule needs >= 4 cutoffs");
  DivergenceReport r;
  r.cutoffs = schedule;
  std::vector<double> xs;
  for (int n : schedule) {
    m.n_max = n;
    r.lamb.push_back(lamb_shift_sum(m));
    r.chi.push_back(chi_sum(m));
    xs.push_back(static_cast<double>(n));
  }
  r.lamb_fit = fit_line(xs, r.lamb);
  bool all_zero = true;
  for (double c : r.chi) all_zero = all_zero && c == 0.0;
  r.chi_degenerate = all_zero;
  for (std::size_t i = 1; i < r.chi.size(); ++i) {
    r.chi_increments.push_back(r.chi[i] - r.chi[i - 1]);
  }
  for (std::size_t i = 1; i < r.chi_increments.size(); ++i) {
    const double prev = r.chi_increments[i - 1];
    r.increment_ratios.push_back(prev == 0.0 ? 0.0 : r.chi_increments[i] / prev);
  }
  return r;
}

}  // namespace dressed_modes
