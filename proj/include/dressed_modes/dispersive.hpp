#pragma once

// Dispersive shifts: the closed form, the first-order boundary perturbation,
// and extraction from exact spectra.
//
// Detuning convention: Delta = omega_q - omega_r. chi is half the resonator
// frequency difference between qubit states e and g.

#include <cmath>
#include <numbers>
#include <string>

#include "dressed_modes/boundary.hpp"
#include "dressed_modes/errors.hpp"
#include "dressed_modes/params.hpp"
#include "dressed_modes/resonator.hpp"
#include "dressed_modes/spectrum.hpp"

namespace dressed_modes {

/// g^2 alpha / (Delta (Delta + alpha)).
inline double chi_closed_form(double g, double alpha, double delta) {
  if (delta == 0.0 || delta + alpha == 0.0) {
    throw PreconditionError("chi is singular at Delta = 0 or Delta = -alpha");
  }
  return g * g * alpha / (delta * (delta + alpha));
}

/// Delta^2 / (4 g^2).
inline double n_crit(double g, double delta) {
  if (!(g > 0.0)) throw PreconditionError("n_crit needs g > 0");
  return delta * delta / (4.0 * g * g);
}

/// First-order shift of the mode at lambda_r: -(v^2 / (omega_r L)) F(lambda_r).
inline double perturbative_shift(const RationalBoundary& b, Eigenparameter lambda_r,
                                 double omega_r, double length, double velocity) {
  if (!(omega_r > 0.0) || !(length > 0.0) || !(velocity > 0.0)) {
    throw PreconditionError("perturbative_shift: inputs must be positive");
  }
  return -(velocity * velocity / (omega_r * length)) * b.value(lambda_r);
}

enum class LambdaConversion {
  linearized,  // lambda_r - lambda_k = -2 omega_r Delta_k / v^2, residues at omega_r
  exact,       // lambda_k = omega_k^2 / v^2, residues at the transition frequency
};

namespace detail {

// Three-level boundary for state s in which pole positions and residues are
// laid out according to `conv`.
inline RationalBoundary dispersive_boundary(const DeviceParams& dev,
                                            const TransmonSpec& spec,
                                            LambdaConversion conv) {
  if (conv == LambdaConversion::exact) return boundary_for_state(spec, dev, 3);
  const double g = resolve_coupling(spec, dev);
  const double wr = dev.fundamental_omega();
  const double v = dev.velocity();
  const double lr = dev.fundamental_lambda().value();
  const double d_ge = residue_from_g(g, wr, dev.length(), v);
  const auto pole_at = [&](double omega) { return lr + 2.0 * wr * (omega - wr) / (v * v); };
  std::vector<BoundaryPole> poles;
  if (spec.state == QubitState::g) {
    poles.push_back({pole_at(spec.omega_q), d_ge, "g->e"});
  } else {
    poles.push_back({pole_at(spec.omega_q), -d_ge, "e->g"});
    poles.push_back({pole_at(spec.omega_ef()), 2.0 * d_ge, "e->f"});
  }
  return RationalBoundary::create(0.0, 0.0, std::move(poles));
}

}  // namespace detail

struct PerturbativeChi {
  double shift_g = 0.0;
  double shift_e = 0.0;
  double chi = 0.0;
};

/// chi = (delta omega_e - delta omega_g) / 2 from first-order shifts of the
/// fundamental. With the linearized conversion this equals chi_closed_form
/// identically.
inline PerturbativeChi perturbative_chi(const DeviceParams& dev, const TransmonSpec& spec,
                                        LambdaConversion conv) {
  const double wr = dev.fundamental_omega();
  const auto lr = dev.fundamental_lambda();
  PerturbativeChi out;
  out.shift_g = perturbative_shift(
      detail::dispersive_boundary(dev, spec.with_state(QubitState::g), conv), lr, wr,
      dev.length(), dev.velocity());
  out.shift_e = perturbative_shift(
      detail::dispersive_boundary(dev, spec.with_state(QubitState::e), conv), lr, wr,
      dev.length(), dev.velocity());
  out.chi = 0.5 * (out.shift_e - out.shift_g);
  return out;
}

struct ExactShifts {
  double omega_g = 0.0;  // dressed fundamental with the qubit in g
  double omega_e = 0.0;  // ... in e
  double chi() const { return 0.5 * (omega_e - omega_g); }
};

/// Dressed fundamental for both qubit states from full root-finding. The
/// resonator-like root is the one nearest the bare fundamental.
inline ExactShifts exact_state_frequencies(const DeviceParams& dev,
                                           const TransmonSpec& spec, int levels = 3) {
  const ResonatorFunction res(dev.length());
  const double lr = dev.fundamental_lambda().value();
  const double lmax = default_lambda_max(dev.length());
  const double v = dev.velocity();
  ExactShifts out;
  const auto bg = boundary_for_state(spec.with_state(QubitState::g), dev, levels);
  out.omega_g = v * std::sqrt(find_eigenvalues(res, bg, lmax).nearest(lr));
  const auto be = boundary_for_state(spec.with_state(QubitState::e), dev, levels);
  out.omega_e = v * std::sqrt(find_eigenvalues(res, be, lmax).nearest(lr));
  return out;
}

/// (omega~_r(e) - omega~_r(g)) / 2 from exact eigenvalues.
inline double chi_from_spectrum(const DeviceParams& dev, const TransmonSpec& spec,
                                int levels = 3) {
  return exact_state_frequencies(dev, spec, levels).chi();
}

enum class DispersiveValidity {
  dispersive,  // |g / Delta| < 0.1
  marginal,    // 0.1 <= |g / Delta| <= 0.3
  outside,     // |g / Delta| > 0.3
};

inline std::string to_string(DispersiveValidity v) {
  switch (v) {
    case DispersiveValidity::dispersive: return "dispersive";
    case DispersiveValidity::marginal: return "marginal";
    case DispersiveValidity::outside: return "outside";
  }
  return "outside";
}

struct RegimeFlags {
  double g_over_delta = 0.0;
  DispersiveValidity validity = DispersiveValidity::dispersive;
  bool straddling = false;  // Delta (Delta + alpha) <= 0
};

inline RegimeFlags regime_flags(double g, double alpha, double delta) {
  RegimeFlags f;
  f.g_over_delta = delta == 0.0 ? std::numeric_limits<double>::infinity()
                                : std::abs(g / delta);
  f.validity = f.g_over_delta < 0.1    ? DispersiveValidity::dispersive
               : f.g_over_delta <= 0.3 ? DispersiveValidity::marginal
                                       : DispersiveValidity::outside;
  f.straddling = delta * (delta + alpha) <= 0.0;
  return f;
}

struct DispersiveResult {
  double chi = 0.0;  // from exact spectra
  double chi_closed = 0.0;
  double chi_perturbative_linearized = 0.0;
  double chi_perturbative_exact = 0.0;
  double delta_omega_g = 0.0;  // exact dressed shift of the fundamental, state g
  double delta_omega_e = 0.0;
  double detuning = 0.0;
  double n_crit = 0.0;
  RegimeFlags flags;
};

/// Every dispersive quantity for `spec` coupled to the fundamental.
inline DispersiveResult analyze_dispersive(const DeviceParams& dev,
                                           const TransmonSpec& spec, int levels = 3) {
  const double wr = dev.fundamental_omega();
  const double g = resolve_coupling(spec, dev);
  DispersiveResult r;
  r.detuning = spec.omega_q - wr;
  r.flags = regime_flags(g, spec.anharmonicity, r.detuning);
  // A transition within the boundary pole guard of omega_r is singular too,
  // not only an exact floating-point zero.
  const double guard = kBoundaryPoleGuard * wr;
  if (std::abs(r.detuning) <= guard || std::abs(r.detuning + spec.anharmonicity) <= guard) {
    throw PreconditionError("chi is singular at Delta = 0 or Delta = -alpha");
  }
  r.chi_closed = chi_closed_form(g, spec.anharmonicity, r.detuning);
  const auto exact = exact_state_frequencies(dev, spec, levels);
  r.chi = exact.chi();
  r.delta_omega_g = exact.omega_g - wr;
  r.delta_omega_e = exact.omega_e - wr;
  r.chi_perturbative_linearized =
      perturbative_chi(dev, spec, LambdaConversion::linearized).chi;
  r.chi_perturbative_exact = perturbative_chi(dev, spec, LambdaConversion::exact).chi;
  r.n_crit = g > 0.0 ? n_crit(g, r.detuning) : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace dressed_modes
