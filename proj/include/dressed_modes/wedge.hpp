#pragma once

// Azimuthal modes of a particle confined to a wedge 0 <= phi <= Phi with
// Dirichlet walls. Only the phi dependence is modelled.

#include <cmath>
#include <numbers>
#include <utility>

#include "dressed_modes/errors.hpp"

namespace dressed_modes {

class WedgeGeometry {
 public:
  static WedgeGeometry create(double angle) {
    if (!(angle > 0.0) || angle > 2.0 * std::numbers::pi) {
      throw PreconditionError("wedge angle must lie in (0, 2 pi]");
    }
    return WedgeGeometry(angle);
  }

  double angle() const noexcept { return angle_; }

 private:
  explicit WedgeGeometry(double a) : angle_(a) {}
  double angle_;
};

namespace detail {
inline void require_mode_index(int n) {
  if (n < 1) throw PreconditionError("wedge mode index must be >= 1");
}
}  // namespace detail

/// Effective azimuthal quantum number n pi / Phi.
inline double wedge_mu(int n, const WedgeGeometry& geom) {
  detail::require_mode_index(n);
  return n * std::numbers::pi / geom.angle();
}

/// Eigenvalue of d^2/dphi^2 on sin(mu_n phi): -mu_n^2.
inline double laplacian_eigenvalue(int n, const WedgeGeometry& geom) {
  const double mu = wedge_mu(n, geom);
  return -mu * mu;
}

/// Dirichlet mode sin(mu_n phi).
inline double wedge_mode(int n, const WedgeGeometry& geom, double phi) {
  return std::sin(wedge_mu(n, geom) * phi);
}

/// Wall values (phi = 0, phi = Phi) of cos(n pi phi / Phi), the image of the
/// n-th Dirichlet mode under d/dphi up to its prefactor. Any nonzero entry
/// means the first-derivative operator leaves the Dirichlet domain.
inline std::pair<double, double> lz_domain_violation(int n,
                                                     const WedgeGeometry& geom) {
  const double mu = wedge_mu(n, geom);
  return {std::cos(mu * 0.0), std::cos(mu * geom.angle())};
}

/// Composite Simpson estimate of the integral of sin(mu_n phi) sin(mu_m phi)
/// over [0, Phi]. `panels` is rounded up to an even count.
inline double wedge_mode_overlap(int n, int m, const WedgeGeometry& geom,
                                 int panels = 20000) {
  detail::require_mode_index(n);
  detail::require_mode_index(m);
  if (panels < 2) throw PreconditionError("Simpson rule needs >= 2 panels");
  if (panels % 2 != 0) ++panels;
  const double a = 0.0;
  const double b = geom.angle();
  const double h = (b - a) / panels;
  auto f = [&](double x) { return wedge_mode(n, geom, x) * wedge_mode(m, geom, x); };
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i) {
    (i % 2 ? odd : even) += f(a + i * h);
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace dressed_modes
