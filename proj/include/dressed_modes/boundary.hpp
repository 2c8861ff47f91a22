#pragma once

// Transmon-side boundary functions F(lambda) = phi'(L) / phi(L).
//
// Rational (pole-dominated) form:
//
//   F(lambda) = beta lambda - gamma - sum_k delta_k / (lambda - lambda_k)
//
// beta = C_J / c is the junction capacitance expressed as a line length,
// gamma = l / L_J the linear junction inductance term, lambda_k the squared
// transition wavenumbers and delta_k signed residues (positive for
// absorption, negative for emission).
//
// Sign convention: every term enters with the sign that follows from current
// conservation at x = L, so the affine part is +beta lambda and an absorptive
// pole makes F rise between its singularities. For the ground state G - F is
// then strictly decreasing between consecutive poles, which is what gives
// one dressed eigenvalue per interval and the 2g vacuum Rabi splitting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dressed_modes/errors.hpp"
#include "dressed_modes/params.hpp"

namespace dressed_modes {

/// Relative exclusion radius around boundary poles; also the minimum
/// relative separation between distinct poles.
inline constexpr double kBoundaryPoleGuard = 1e-9;

struct BoundaryPole {
  double location = 0.0;  // lambda_k, 1/m^2
  double residue = 0.0;   // delta_k, 1/m^3
  std::string label;
};

class RationalBoundary {
 public:
  /// Validates and sorts the poles by location.
  static RationalBoundary create(double beta, double gamma,
                                 std::vector<BoundaryPole> poles) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw PreconditionError("beta must be finite and >= 0");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      throw PreconditionError("gamma must be finite and >= 0");
    }
    for (const auto& p : poles) {
      if (!(p.location > 0.0) || !std::isfinite(p.location)) {
        throw PreconditionError("pole locations must be positive and finite");
      }
      if (!std::isfinite(p.residue)) {
        throw PreconditionError("pole residues must be finite");
      }
    }
    std::sort(poles.begin(), poles.end(),
              [](const auto& a, const auto& b) { return a.location < b.location; });
    for (std::size_t i = 1; i < poles.size(); ++i) {
      const double a = poles[i - 1].location;
      const double b = poles[i].location;
      if (b - a <= kBoundaryPoleGuard * b) {
        throw PreconditionError("boundary poles '" + poles[i - 1].label +
                                "' and '" + poles[i].label +
                                "' are not distinct");
      }
    }
    return RationalBoundary(beta, gamma, std::move(poles));
  }

  /// F identically zero: the open-circuit (quarter-wave) termination.
  static RationalBoundary open_circuit() { return create(0.0, 0.0, {}); }

  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  const std::vector<BoundaryPole>& poles() const noexcept { return poles_; }

  /// True when no pole carries a negative residue (ground-state structure).
  bool residues_nonnegative() const noexcept {
    return std::all_of(poles_.begin(), poles_.end(),
                       [](const auto& p) { return p.residue >= 0.0; });
  }

  double value(Eigenparameter lambda) const {
    check_pole(lambda.value());
    return value_unchecked(lambda.value());
  }

  /// dF/dlambda = beta + sum_k delta_k / (lambda - lambda_k)^2.
  double derivative(Eigenparameter lambda) const {
    check_pole(lambda.value());
    return derivative_unchecked(lambda.value());
  }

  // Kernels used by the eigenvalue solver. `anchor` names a pole whose
  // distance to lambda is passed exactly as `offset`.
  double value_unchecked(double lambda,
                         std::size_t anchor = npos, double offset = 0.0) const {
    double sum = beta_ * lambda - gamma_;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
      const auto& p = poles_[i];
      if (p.residue == 0.0) continue;
      const double d = (i == anchor) ? offset : lambda - p.location;
      sum -= p.residue / d;
    }
    return sum;
  }

  double derivative_unchecked(double lambda,
                              std::size_t anchor = npos, double offset = 0.0) const {
    double sum = beta_;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
      const auto& p = poles_[i];
      if (p.residue == 0.0) continue;
      const double d = (i == anchor) ? offset : lambda - p.location;
      sum += p.residue / (d * d);
    }
    return sum;
  }

  /// Boundary of two elements terminating the same line in parallel. Poles
  /// closer than kBoundaryPoleGuard are merged by adding their residues.
  friend RationalBoundary operator+(const RationalBoundary& a,
                                    const RationalBoundary& b) {
    std::vector<BoundaryPole> merged = a.poles_;
    for (const auto& p : b.poles_) {
      auto same = std::find_if(merged.begin(), merged.end(), [&](const auto& q) {
        return std::abs(q.location - p.location) <=
               kBoundaryPoleGuard * std::max(q.location, p.location);
      });
      if (same == merged.end()) {
        merged.push_back(p);
      } else {
        same->residue += p.residue;
        same->label += "+" + p.label;
      }
    }
    return create(a.beta_ + b.beta_, a.gamma_ + b.gamma_, std::move(merged));
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  RationalBoundary(double beta, double gamma, std::vector<BoundaryPole> poles)
      : beta_(beta), gamma_(gamma), poles_(std::move(poles)) {}

  void check_pole(double lambda) const {
    for (std::size_t i = 0; i < poles_.size(); ++i) {
      const auto& p = poles_[i];
      if (p.residue != 0.0 &&
          std::abs(lambda - p.location) <= kBoundaryPoleGuard * p.location) {
        throw PoleProximityError("boundary function evaluated at pole '" +
                                     p.label + "'",
                                 i, p.location);
      }
    }
  }

  double beta_;
  double gamma_;
  std::vector<BoundaryPole> poles_;
};

// ---------------------------------------------------------------------------
// Residues and couplings

/// Vacuum Rabi coupling g = |Q_ge| sqrt(omega_r / (2 hbar c L)).
inline double g_from_charge(double charge, double omega_r,
                            double capacitance_per_length, double length) {
  if (!(charge >= 0.0) || !(omega_r > 0.0) || !(capacitance_per_length > 0.0) ||
      !(length > 0.0)) {
    throw PreconditionError("g_from_charge: inputs must be positive");
  }
  return charge * std::sqrt(omega_r / (2.0 * kHbar * capacitance_per_length * length));
}

inline double charge_from_g(double g, double omega_r,
                            double capacitance_per_length, double length) {
  if (!(g >= 0.0) || !(omega_r > 0.0) || !(capacitance_per_length > 0.0) ||
      !(length > 0.0)) {
    throw PreconditionError("charge_from_g: inputs must be positive");
  }
  return g / std::sqrt(omega_r / (2.0 * kHbar * capacitance_per_length * length));
}

/// delta_nm = sign(omega_nm) 2 L g_nm^2 omega_nm^2 / v^4 for a transition of
/// signed frequency omega_nm (negative for emission).
inline double residue_from_g(double g, double omega_signed, double length,
                             double velocity) {
  if (!(length > 0.0) || !(velocity > 0.0)) {
    throw PreconditionError("residue_from_g: length and velocity must be positive");
  }
  const double v2 = velocity * velocity;
  const double mag = 2.0 * length * g * g * omega_signed * omega_signed / (v2 * v2);
  return omega_signed < 0.0 ? -mag : mag;
}

/// Resonant g-e residue written through the charge matrix element,
/// delta_ge = omega_r^3 |Q_ge|^2 Z0 / (hbar v^3). Equal to
/// residue_from_g(g_from_charge(Q, omega_r, c, L), omega_r, L, v) for any L.
inline double residue_from_charge(double charge, double omega_r, double velocity,
                                  double impedance) {
  if (!(charge >= 0.0) || !(omega_r > 0.0) || !(velocity > 0.0) ||
      !(impedance > 0.0)) {
    throw PreconditionError("residue_from_charge: inputs must be positive");
  }
  const double w3 = omega_r * omega_r * omega_r;
  const double v3 = velocity * velocity * velocity;
  return w3 * charge * charge * impedance / (kHbar * v3);
}

/// Coupling g in rad/s, deriving it from |Q_ge| at the fundamental when the
/// spec carries a charge element.
inline double resolve_coupling(const TransmonSpec& spec, const DeviceParams& dev) {
  if (spec.coupling) return *spec.coupling;
  if (spec.charge_element) {
    return g_from_charge(*spec.charge_element, dev.fundamental_omega(),
                         dev.capacitance_per_length(), dev.length());
  }
  throw PreconditionError("transmon spec has neither coupling nor charge element");
}

/// Rational boundary seen by the line when the transmon sits in `spec.state`.
///
/// Ground state: one absorptive pole at lambda_q. Excited state: emission
/// pole at lambda_q with residue -delta_ge and, for three levels, an
/// absorptive e-f pole with coupling sqrt(2) g at (omega_q + alpha)^2 / v^2.
/// Residues use each transition's own frequency. beta = C_J / c when C_J is
/// known; gamma is left at zero because the poles already carry the junction
/// response.
inline RationalBoundary boundary_for_state(const TransmonSpec& spec,
                                           const DeviceParams& dev,
                                           int include_levels = 3) {
  if (include_levels != 2 && include_levels != 3) {
    throw PreconditionError("include_levels must be 2 or 3");
  }
  spec.validate();
  const double g = resolve_coupling(spec, dev);
  const double length = dev.length();
  const double v = dev.velocity();
  const double lambda_q = omega_to_lambda(spec.omega_q, v).value();
  const double beta = spec.junction_capacitance
                          ? *spec.junction_capacitance / dev.capacitance_per_length()
                          : 0.0;

  std::vector<BoundaryPole> poles;
  if (spec.state == QubitState::g) {
    poles.push_back({lambda_q, residue_from_g(g, spec.omega_q, length, v), "g->e"});
  } else {
    poles.push_back({lambda_q, residue_from_g(g, -spec.omega_q, length, v), "e->g"});
    if (include_levels == 3) {
      const double w_ef = spec.omega_ef();
      if (!(w_ef > 0.0)) {
        throw PreconditionError("e->f transition frequency must be positive");
      }
      poles.push_back({omega_to_lambda(w_ef, v).value(),
                       residue_from_g(std::numbers::sqrt2 * g, w_ef, length, v),
                       "e->f"});
    }
  }
  return RationalBoundary::create(beta, 0.0, std::move(poles));
}

/// Classical linearized junction: F = beta lambda - gamma with no poles.
/// Needs both C_J and L_J.
inline RationalBoundary affine_junction_boundary(const TransmonSpec& spec,
                                                 const DeviceParams& dev) {
  if (!spec.junction_capacitance || !spec.junction_inductance) {
    throw PreconditionError("affine junction model needs C_J and L_J");
  }
  const double beta = *spec.junction_capacitance / dev.capacitance_per_length();
  const double gamma = dev.inductance_per_length() / *spec.junction_inductance;
  return RationalBoundary::create(beta, gamma, {});
}

/// Boundary amplitudes xi_k = sqrt(|delta_k|) phi(L) / (lambda - lambda_k) of
/// the extended eigenvector belonging to `lambda`.
inline std::vector<double> extended_components(const RationalBoundary& b,
                                               Eigenparameter lambda,
                                               double phi_at_boundary) {
  std::vector<double> xi;
  xi.reserve(b.poles().size());
  for (const auto& p : b.poles()) {
    if (std::abs(lambda.value() - p.location) <= kBoundaryPoleGuard * p.location) {
      throw PoleProximityError("eigenvalue coincides with pole '" + p.label + "'",
                               static_cast<std::size_t>(&p - b.poles().data()),
                               p.location);
    }
    xi.push_back(std::sqrt(std::abs(p.residue)) * phi_at_boundary /
                 (lambda.value() - p.location));
  }
  return xi;
}

// ---------------------------------------------------------------------------
// Full (non-rational) susceptance form

struct SusceptanceTerm {
  double amplitude = 0.0;  // A_nm, S/s
  double omega = 0.0;      // |omega_mn|, rad/s
  std::string label;
};

/// F_full(lambda) = l v^2 lambda C_J + sum l v^2 A lambda / (omega^2 - v^2 lambda),
/// the linear-response boundary before the slowly varying numerators are
/// frozen at a reference frequency.
class FullSusceptanceBoundary {
 public:
  static FullSusceptanceBoundary create(double junction_capacitance,
                                        std::vector<SusceptanceTerm> terms,
                                        double inductance_per_length,
                                        double velocity) {
    if (!(junction_capacitance >= 0.0)) {
      throw PreconditionError("junction capacitance must be >= 0");
    }
    if (!(inductance_per_length > 0.0) || !(velocity > 0.0)) {
      throw PreconditionError("line constants must be positive");
    }
    for (const auto& t : terms) {
      if (!(t.omega > 0.0) || !std::isfinite(t.amplitude)) {
        throw PreconditionError("susceptance terms need omega > 0 and finite A");
      }
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.omega < b.omega; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (terms[i].omega - terms[i - 1].omega <= kBoundaryPoleGuard * terms[i].omega) {
        throw PreconditionError("susceptance term frequencies must be distinct");
      }
    }
    return FullSusceptanceBoundary(junction_capacitance, std::move(terms),
                                   inductance_per_length, velocity);
  }

  /// Chooses C_J and A_k so that freezing lambda = `reference` in the
  /// numerators reproduces `rational` exactly: C_J = beta / (l v^2) and
  /// A_k = delta_k / (l lambda_ref). Requires gamma = 0.
  static FullSusceptanceBoundary calibrated(const RationalBoundary& rational,
                                            Eigenparameter reference,
                                            double inductance_per_length,
                                            double velocity) {
    if (rational.gamma() != 0.0) {
      throw PreconditionError("full susceptance form has no inductive term");
    }
    if (!(reference.value() > 0.0)) {
      throw PreconditionError("reference eigenparameter must be positive");
    }
    const double lv2 = inductance_per_length * velocity * velocity;
    std::vector<SusceptanceTerm> terms;
    for (const auto& p : rational.poles()) {
      terms.push_back({p.residue / (inductance_per_length * reference.value()),
                       velocity * std::sqrt(p.location), p.label});
    }
    return create(rational.beta() / lv2, std::move(terms), inductance_per_length,
                  velocity);
  }

  double junction_capacitance() const noexcept { return cj_; }
  const std::vector<SusceptanceTerm>& terms() const noexcept { return terms_; }

  /// Singularities in rational form: location omega^2 / v^2 and effective
  /// residue l A lambda_k, which sets the sign of the divergence.
  const std::vector<BoundaryPole>& poles() const noexcept { return poles_; }

  bool residues_nonnegative() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.amplitude >= 0.0; });
  }

  double value(Eigenparameter lambda) const {
    check_pole(lambda.value());
    return value_unchecked(lambda.value());
  }

  double derivative(Eigenparameter lambda) const {
    check_pole(lambda.value());
    return derivative_unchecked(lambda.value());
  }

  // omega^2 - v^2 lambda is replaced by -v^2 offset for the anchored term.
  double value_unchecked(double lambda, std::size_t anchor = RationalBoundary::npos,
                         double offset = 0.0) const {
    const double v2 = v_ * v_;
    double sum = ell_ * v2 * lambda * cj_;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      const double d = i == anchor ? -v2 * offset : t.omega * t.omega - v2 * lambda;
      sum += ell_ * v2 * t.amplitude * lambda / d;
    }
    return sum;
  }

  double derivative_unchecked(double lambda, std::size_t anchor = RationalBoundary::npos,
                              double offset = 0.0) const {
    const double v2 = v_ * v_;
    double sum = ell_ * v2 * cj_;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      const double w2 = t.omega * t.omega;
      const double d = i == anchor ? -v2 * offset : w2 - v2 * lambda;
      sum += ell_ * v2 * t.amplitude * w2 / (d * d);
    }
    return sum;
  }

 private:
  FullSusceptanceBoundary(double cj, std::vector<SusceptanceTerm> terms,
                          double ell, double v)
      : cj_(cj), terms_(std::move(terms)), ell_(ell), v_(v) {
    for (const auto& t : terms_) {
      const double loc = t.omega * t.omega / (v_ * v_);
      poles_.push_back({loc, ell_ * t.amplitude * loc, t.label});
    }
  }

  void check_pole(double lambda) const {
    const double v2 = v_ * v_;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const double w2 = terms_[i].omega * terms_[i].omega;
      if (std::abs(v2 * lambda - w2) <= kBoundaryPoleGuard * w2) {
        throw PoleProximityError("full susceptance evaluated at pole '" +
                                     terms_[i].label + "'",
                                 i, w2 / v2);
      }
    }
  }

  double cj_;
  std::vector<SusceptanceTerm> terms_;
  double ell_;
  double v_;
  std::vector<BoundaryPole> poles_;
};

}  // namespace dressed_modes
