#pragma once

// Bare-resonator side of the dressed-mode equation:
//
//   G(lambda) = sqrt(lambda) cot(sqrt(lambda) L),
//
// the log-derivative phi'(L)/phi(L) of phi(x) = sin(sqrt(lambda) x), which
// vanishes at the grounded end. G has poles at the Dirichlet eigenvalues
// (k pi / L)^2, zeros at the quarter-wave eigenvalues ((2k-1) pi / (2L))^2,
// and decreases strictly between consecutive poles.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "dressed_modes/errors.hpp"
#include "dressed_modes/params.hpp"

namespace dressed_modes {

/// Radius, in xi = sqrt(lambda) L, of the exclusion zone around each pole.
inline constexpr double kResonatorPoleGuard = 1e-9;

namespace detail {

inline void require_length(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw PreconditionError("resonator length must be positive");
  }
}

inline void check_resonator_pole(double xi) {
  const double k = std::round(xi / std::numbers::pi);
  if (k >= 1.0 && std::abs(xi - k * std::numbers::pi) < kResonatorPoleGuard) {
    throw PoleProximityError(
        "resonator function evaluated at Dirichlet pole k=" +
            std::to_string(static_cast<long long>(k)),
        static_cast<std::size_t>(k), 0.0);
  }
}

// Unchecked kernels. The solver calls these at points it has already kept
// away from the poles.
inline double g_value(double lambda, double length) {
  if (lambda == 0.0) return 1.0 / length;
  const double s = std::sqrt(lambda);
  const double xi = s * length;
  return s * std::cos(xi) / std::sin(xi);
}

inline double g_derivative(double lambda, double length) {
  const double s = std::sqrt(lambda);
  const double xi = s * length;
  if (xi < 1e-2) {
    const double x2 = xi * xi;
    return length * (-1.0 / 3.0 - 2.0 * x2 / 45.0 - 2.0 * x2 * x2 / 315.0);
  }
  const double sn = std::sin(xi);
  return std::cos(xi) / (2.0 * s * sn) - 0.5 * length / (sn * sn);
}

// Evaluation at lambda = pole + offset next to a Dirichlet pole. The phase
// xi - k pi is formed from the offset directly so that points a few ulp from
// the pole keep full relative accuracy.
inline double g_value_near_pole(double pole, double offset, double length) {
  const double s = std::sqrt(pole + offset);
  const double u = length * offset / (s + std::sqrt(pole));
  return s * std::cos(u) / std::sin(u);
}

inline double g_derivative_near_pole(double pole, double offset, double length) {
  const double s = std::sqrt(pole + offset);
  const double u = length * offset / (s + std::sqrt(pole));
  const double sn = std::sin(u);
  return std::cos(u) / (2.0 * s * sn) - 0.5 * length / (sn * sn);
}

}  // namespace detail

/// G(lambda). Returns the analytic limit 1/L at lambda = 0; throws
/// PoleProximityError within kResonatorPoleGuard (in xi) of a Dirichlet pole.
inline double resonator_value(Eigenparameter lambda, double length) {
  detail::require_length(length);
  const double x = lambda.value();
  if (!(x >= 0.0)) throw PreconditionError("eigenparameter must be >= 0");
  if (x > 0.0) detail::check_resonator_pole(std::sqrt(x) * length);
  return detail::g_value(x, length);
}

/// dG/dlambda = cot(xi) / (2 sqrt(lambda)) - (L/2) csc^2(xi), xi = sqrt(lambda) L.
inline double resonator_derivative(Eigenparameter lambda, double length) {
  detail::require_length(length);
  const double x = lambda.value();
  if (!(x > 0.0)) throw PreconditionError("eigenparameter must be > 0");
  detail::check_resonator_pole(std::sqrt(x) * length);
  return detail::g_derivative(x, length);
}

/// (k pi / L)^2 for k = 1..k_max.
inline std::vector<Eigenparameter> dirichlet_poles(double length, int k_max) {
  detail::require_length(length);
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  std::vector<Eigenparameter> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double q = k * std::numbers::pi / length;
    out.emplace_back(q * q);
  }
  return out;
}

/// ((2k - 1) pi / (2L))^2 for k = 1..k_max, the open-circuit eigenvalues.
inline std::vector<Eigenparameter> quarterwave_zeros(double length, int k_max) {
  detail::require_length(length);
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  std::vector<Eigenparameter> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double q = (2 * k - 1) * std::numbers::pi / (2.0 * length);
    out.emplace_back(q * q);
  }
  return out;
}

/// Value type bundling a resonator length with the functions above.
class ResonatorFunction {
 public:
  explicit ResonatorFunction(double length) : length_(length) {
    detail::require_length(length);
  }

  double length() const noexcept { return length_; }

  double value(Eigenparameter lambda) const {
    return resonator_value(lambda, length_);
  }
  double derivative(Eigenparameter lambda) const {
    return resonator_derivative(lambda, length_);
  }
  std::vector<Eigenparameter> poles(int k_max) const {
    return dirichlet_poles(length_, k_max);
  }
  std::vector<Eigenparameter> zeros(int k_max) const {
    return quarterwave_zeros(length_, k_max);
  }
  Eigenparameter dirichlet(int k) const {
    const double q = k * std::numbers::pi / length_;
    return Eigenparameter(q * q);
  }

 private:
  double length_;
};

}  // namespace dressed_modes
