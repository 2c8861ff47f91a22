#pragma once

// Physical parameter records and unit conversions.
//
// Internal units are SI with angular frequencies in rad/s. Human-facing
// frequencies (config files, CLI output) are in GHz of ordinary frequency,
// i.e. omega / (2 pi 1e9).

#include <cmath>
#include <compare>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "dressed_modes/errors.hpp"

namespace dressed_modes {

/// Reduced Planck constant, J s.
inline constexpr double kHbar = 1.054571817e-34;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// rad/s per GHz of ordinary frequency.
inline constexpr double kRadPerGHz = kTwoPi * 1e9;

constexpr double ghz_to_rad(double ghz) noexcept { return ghz * kRadPerGHz; }
constexpr double rad_to_ghz(double omega) noexcept { return omega / kRadPerGHz; }
constexpr double rad_to_mhz(double omega) noexcept { return omega / (kTwoPi * 1e6); }
constexpr double rad_to_hz(double omega) noexcept { return omega / kTwoPi; }

/// Squared wavenumber omega^2 / v^2, in 1/m^2.
class Eigenparameter {
 public:
  constexpr Eigenparameter() = default;
  constexpr explicit Eigenparameter(double lambda) : value_(lambda) {}

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const Eigenparameter&,
                                    const Eigenparameter&) = default;

 private:
  double value_ = 0.0;
};

inline Eigenparameter omega_to_lambda(double omega, double velocity) {
  if (!(omega >= 0.0)) {
    throw PreconditionError("omega_to_lambda: angular frequency must be >= 0");
  }
  if (!(velocity > 0.0)) {
    throw PreconditionError("omega_to_lambda: phase velocity must be > 0");
  }
  const double k = omega / velocity;
  return Eigenparameter(k * k);
}

inline double lambda_to_omega(Eigenparameter lambda, double velocity) {
  if (!(lambda.value() >= 0.0)) {
    throw PreconditionError("lambda_to_omega: eigenparameter must be >= 0");
  }
  if (!(velocity > 0.0)) {
    throw PreconditionError("lambda_to_omega: phase velocity must be > 0");
  }
  return velocity * std::sqrt(lambda.value());
}

/// Transmission-line resonator grounded at x = 0 and open toward the qubit at
/// x = L. Immutable once built.
class DeviceParams {
 public:
  static DeviceParams create(double length_m, double velocity_m_s,
                             double impedance_ohm) {
    if (!(length_m > 0.0) || !std::isfinite(length_m)) {
      throw PreconditionError("resonator length must be positive");
    }
    if (!(velocity_m_s > 0.0) || !std::isfinite(velocity_m_s)) {
      throw PreconditionError("phase velocity must be positive");
    }
    if (!(impedance_ohm > 0.0) || !std::isfinite(impedance_ohm)) {
      throw PreconditionError("characteristic impedance must be positive");
    }
    return DeviceParams(length_m, velocity_m_s, impedance_ohm);
  }

  double length() const noexcept { return length_; }
  double velocity() const noexcept { return velocity_; }
  double impedance() const noexcept { return impedance_; }

  /// l = Z0 / v, H/m.
  double inductance_per_length() const noexcept { return impedance_ / velocity_; }
  /// c = 1 / (Z0 v), F/m.
  double capacitance_per_length() const noexcept {
    return 1.0 / (impedance_ * velocity_);
  }
  /// cL, the total line capacitance.
  double total_capacitance() const noexcept {
    return capacitance_per_length() * length_;
  }

  /// Bare quarter-wave fundamental, pi v / (2 L).
  double fundamental_omega() const noexcept {
    return std::numbers::pi * velocity_ / (2.0 * length_);
  }
  Eigenparameter fundamental_lambda() const noexcept {
    const double k = std::numbers::pi / (2.0 * length_);
    return Eigenparameter(k * k);
  }

  /// k-th Dirichlet eigenvalue (k pi / L)^2.
  Eigenparameter dirichlet_lambda(int k) const noexcept {
    const double q = k * std::numbers::pi / length_;
    return Eigenparameter(q * q);
  }

 private:
  DeviceParams(double l, double v, double z)
      : length_(l), velocity_(v), impedance_(z) {}

  double length_;
  double velocity_;
  double impedance_;
};

enum class QubitState { g, e };

inline std::string_view to_string(QubitState s) noexcept {
  return s == QubitState::g ? "g" : "e";
}

inline QubitState parse_qubit_state(std::string_view text) {
  if (text == "g") return QubitState::g;
  if (text == "e") return QubitState::e;
  throw PreconditionError("qubit state must be 'g' or 'e', got '" +
                          std::string(text) + "'");
}

/// Transmon level structure. Exactly one of `coupling` and `charge_element`
/// is set; `validate()` enforces the invariants.
struct TransmonSpec {
  QubitState state = QubitState::g;
  double omega_q = 0.0;        // rad/s, g -> e transition
  double anharmonicity = 0.0;  // rad/s, omega_ef - omega_ge (< 0)
  std::optional<double> coupling;        // g, rad/s
  std::optional<double> charge_element;  // |Q_ge|, C
  std::optional<double> junction_capacitance;  // C_J, F
  std::optional<double> junction_inductance;   // L_J, H

  void validate() const {
    if (!(omega_q > 0.0) || !std::isfinite(omega_q)) {
      throw PreconditionError("qubit frequency must be positive");
    }
    if (!(anharmonicity < 0.0)) {
      throw PreconditionError("anharmonicity must be negative");
    }
    if (coupling.has_value() == charge_element.has_value()) {
      throw PreconditionError(
          "exactly one of coupling and charge element must be given");
    }
    // g = 0 is admitted as the decoupled limit; config files require g > 0.
    if (coupling && !(*coupling >= 0.0)) {
      throw PreconditionError("coupling must be non-negative");
    }
    if (charge_element && !(*charge_element > 0.0)) {
      throw PreconditionError("charge element must be positive");
    }
    if (junction_capacitance && !(*junction_capacitance > 0.0)) {
      throw PreconditionError("junction capacitance must be positive");
    }
    if (junction_inductance && !(*junction_inductance > 0.0)) {
      throw PreconditionError("junction inductance must be positive");
    }
  }

  double omega_ef() const noexcept { return omega_q + anharmonicity; }

  TransmonSpec with_state(QubitState s) const {
    TransmonSpec copy = *this;
    copy.state = s;
    return copy;
  }
  TransmonSpec with_frequency(double w) const {
    TransmonSpec copy = *this;
    copy.omega_q = w;
    return copy;
  }
};

}  // namespace dressed_modes
