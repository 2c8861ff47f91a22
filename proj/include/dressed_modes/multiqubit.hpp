#pragma once

// Two qubits dispersively coupled to one mode.
//
// Sign convention: sigma_z = +1 for g and -1 for e, so
// omega(s1, s2) = omega_r + chi1 s1 + chi2 s2. In this convention the map
// coefficient of qubit j is (omega_g - omega_e) / 2, the negative of the
// single-qubit dispersive chi.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>

#include "dressed_modes/boundary.hpp"
#include "dressed_modes/dispersive.hpp"
#include "dressed_modes/errors.hpp"
#include "dressed_modes/spectrum.hpp"

namespace dressed_modes {

enum class JointState { gg = 0, ge = 1, eg = 2, ee = 3 };

inline constexpr std::array<JointState, 4> kJointStates = {
    JointState::gg, JointState::ge, JointState::eg, JointState::ee};

inline std::string_view to_string(JointState s) {
  constexpr std::array<std::string_view, 4> names = {"gg", "ge", "eg", "ee"};
  return names[static_cast<int>(s)];
}

inline int sigma_z1(JointState s) {
  return (s == JointState::gg || s == JointState::ge) ? 1 : -1;
}
inline int sigma_z2(JointState s) {
  return (s == JointState::gg || s == JointState::eg) ? 1 : -1;
}
inline int parity(JointState s) { return sigma_z1(s) * sigma_z2(s); }

inline QubitState qubit1_state(JointState s) {
  return sigma_z1(s) > 0 ? QubitState::g : QubitState::e;
}
inline QubitState qubit2_state(JointState s) {
  return sigma_z2(s) > 0 ? QubitState::g : QubitState::e;
}

struct TwoQubitDispersiveModel {
  double omega_r = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  std::optional<double> chi_parity;  // engineered chi_P; replaces chi1, chi2
};

using JointFrequencies = std::array<double, 4>;  // indexed by JointState

inline double state_frequency(const TwoQubitDispersiveModel& m, JointState s) {
  if (m.chi_parity) return m.omega_r + *m.chi_parity * parity(s);
  return m.omega_r + m.chi1 * sigma_z1(s) + m.chi2 * sigma_z2(s);
}

inline JointFrequencies state_frequencies(const TwoQubitDispersiveModel& m) {
  JointFrequencies f{};
  for (auto s : kJointStates) f[static_cast<int>(s)] = state_frequency(m, s);
  return f;
}

struct ParityReport {
  double odd_gap = 0.0;   // |omega(ge) - omega(eg)| = 2 |chi1 - chi2|
  double even_gap = 0.0;  // |omega(gg) - omega(ee)| = 2 |chi1 + chi2|
  bool odd_coherence_protected = false;
  bool even_coherence_protected = false;
};

/// Gaps are formed from the shifts directly so that matched shifts give an
/// exact zero.
inline ParityReport parity_degeneracy_check(const TwoQubitDispersiveModel& m) {
  ParityReport r;
  if (m.chi_parity) {
    r.odd_gap = 0.0;
    r.even_gap = 0.0;
  } else {
    r.odd_gap = 2.0 * std::abs(m.chi1 - m.chi2);
    r.even_gap = 2.0 * std::abs(m.chi1 + m.chi2);
  }
  r.odd_coherence_protected = r.odd_gap == 0.0;
  r.even_coherence_protected = r.even_gap == 0.0;
  return r;
}

/// Diagonal H_disp on |s, n>, index s (N + 1) + n, entries n omega(s).
inline Eigen::MatrixXd dispersive_hamiltonian_matrix(const TwoQubitDispersiveModel& m,
                                                     int fock_cutoff) {
  if (fock_cutoff < 1) throw PreconditionError("Fock cutoff must be >= 1");
  const int np = fock_cutoff + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4 * np, 4 * np);
  for (auto s : kJointStates) {
    const double w = state_frequency(m, s);
    for (int n = 0; n < np; ++n) {
      const int i = static_cast<int>(s) * np + n;
      h(i, i) = n * w;
    }
  }
  return h;
}

/// P (x) I in the same basis.
inline Eigen::MatrixXd parity_operator(int fock_cutoff) {
  if (fock_cutoff < 1) throw PreconditionError("Fock cutoff must be >= 1");
  const int np = fock_cutoff + 1;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4 * np, 4 * np);
  for (auto s : kJointStates) {
    for (int n = 0; n < np; ++n) {
      const int i = static_cast<int>(s) * np + n;
      p(i, i) = parity(s);
    }
  }
  return p;
}

template <class A, class B>
auto commutator(const A& a, const B& b) {
  return (a * b - b * a).eval();
}

struct CommutatorNorms {
  double h_sz = 0.0;        // ||[H_int, sigma_z]||
  double h_sx = 0.0;        // ||[H_int, sigma_x]||
  double sx_residual = 0.0; // ||[H_int, sigma_x] - 2 i chi n sigma_y||
};

/// Frobenius norms for H_int = chi sigma_z n on qubit (x) Fock(N).
inline CommutatorNorms single_qubit_commutators(double chi, int fock_cutoff) {
  if (fock_cutoff < 1) throw PreconditionError("Fock cutoff must be >= 1");
  using C = std::complex<double>;
  using M = Eigen::MatrixXcd;
  const int np = fock_cutoff + 1;
  M num = M::Zero(np, np);
  for (int n = 0; n < np; ++n) num(n, n) = static_cast<double>(n);
  M sz(2, 2), sx(2, 2), sy(2, 2);
  sz << 1.0, 0.0, 0.0, -1.0;
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, C(0.0, -1.0), C(0.0, 1.0), 0.0;

  const auto kron = [](const M& a, const M& b) {
    M out = M::Zero(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  };
  const M id = M::Identity(np, np);
  const M h = chi * kron(sz, num);
  const M z = kron(sz, id);
  const M x = kron(sx, id);
  const M y_n = kron(sy, num);

  CommutatorNorms c;
  c.h_sz = commutator(h, z).norm();
  const M hx = commutator(h, x);
  c.h_sx = hx.norm();
  c.sx_residual = (hx - C(0.0, 2.0 * chi) * y_n).norm();
  return c;
}

// ---------------------------------------------------------------------------
// From boundary functions

struct TwoQubitFromBoundaries {
  TwoQubitDispersiveModel model;  // omega_r renormalized by single-qubit shifts
  JointFrequencies summed_exact{};  // roots with F1 + F2 for each joint state
  /// max_s |summed_exact(s) - model(s)|.
  double max_deviation = 0.0;
  /// Same after moving the state-independent offset into omega_r, i.e.
  /// comparing deviations from the four-state mean.
  double max_deviation_renormalized = 0.0;
};

/// Dressed fundamental for a joint state with both qubits terminating the
/// line in parallel.
inline double summed_boundary_frequency(const DeviceParams& dev, const TransmonSpec& q1,
                                        const TransmonSpec& q2, JointState s,
                                        int levels = 3) {
  const auto b = boundary_for_state(q1.with_state(qubit1_state(s)), dev, levels) +
                 boundary_for_state(q2.with_state(qubit2_state(s)), dev, levels);
  const ResonatorFunction res(dev.length());
  const auto spectrum = find_eigenvalues(res, b, default_lambda_max(dev.length()));
  return dev.velocity() * std::sqrt(spectrum.nearest(dev.fundamental_lambda().value()));
}

inline TwoQubitFromBoundaries from_two_boundaries(const DeviceParams& dev,
                                                  const TransmonSpec& q1,
                                                  const TransmonSpec& q2,
                                                  int levels = 3) {
  const double wr = dev.fundamental_omega();
  const auto s1 = exact_state_frequencies(dev, q1, levels);
  const auto s2 = exact_state_frequencies(dev, q2, levels);
  TwoQubitFromBoundaries out;
  out.model.omega_r = wr + (0.5 * (s1.omega_g + s1.omega_e) - wr) +
                      (0.5 * (s2.omega_g + s2.omega_e) - wr);
  out.model.chi1 = -s1.chi();
  out.model.chi2 = -s2.chi();

  const auto map = state_frequencies(out.model);
  double mean = 0.0;
  for (auto s : kJointStates) {
    const int i = static_cast<int>(s);
    out.summed_exact[i] = summed_boundary_frequency(dev, q1, q2, s, levels);
    mean += 0.25 * out.summed_exact[i];
  }
  for (auto s : kJointStates) {
    const int i = static_cast<int>(s);
    out.max_deviation = std::max(out.max_deviation, std::abs(out.summed_exact[i] - map[i]));
    out.max_deviation_renormalized =
        std::max(out.max_deviation_renormalized,
                 std::abs((out.summed_exact[i] - mean) - (map[i] - out.model.omega_r)));
  }
  return out;
}

}  // namespace dressed_modes
