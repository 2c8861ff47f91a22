#pragma once

// Truncated Jaynes-Cummings model of a transmon ladder coupled to one mode,
// in the rotating-wave approximation. Used as an independent oracle for the
// boundary-value spectra. All energies in rad/s (hbar = 1).
//
// Basis |j, n> with qubit level j in {0, .., M-1} and photon number
// n in {0, .., N}, stored at index j (N + 1) + n.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "dressed_modes/errors.hpp"
#include "dressed_modes/spectrum.hpp"

namespace dressed_modes {

struct JCModel {
  double omega_r = 0.0;
  double omega_q = 0.0;
  double anharmonicity = 0.0;  // used when levels == 3
  double g = 0.0;
  int levels = 3;              // M
  int fock_cutoff = 10;        // N

  void validate() const {
    if (levels != 2 && levels != 3) throw PreconditionError("JC levels must be 2 or 3");
    if (fock_cutoff < 2) throw PreconditionError("Fock cutoff must be >= 2");
    if (!(g >= 0.0)) throw PreconditionError("JC coupling must be >= 0");
  }

  int dimension() const { return levels * (fock_cutoff + 1); }
  int index(int j, int n) const { return j * (fock_cutoff + 1) + n; }

  double level_energy(int j) const {
    if (j == 0) return 0.0;
    if (j == 1) return omega_q;
    return 2.0 * omega_q + anharmonicity;
  }
};

/// Single-excitation dressed pair omega_r + Delta/2 -/+ sqrt(Delta^2/4 + g^2).
inline std::pair<double, double> dressed_two_level(double omega_r, double omega_q,
                                                   double g) {
  if (!(g >= 0.0)) throw PreconditionError("coupling must be >= 0");
  const double delta = omega_q - omega_r;
  const double root = std::hypot(0.5 * delta, g);
  return {omega_r + 0.5 * delta - root, omega_r + 0.5 * delta + root};
}

namespace detail {
inline Eigen::MatrixXd build_jc(const JCModel& m, int fock_cutoff) {
  const int np = fock_cutoff + 1;
  const int dim = m.levels * np;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < m.levels; ++j) {
    for (int n = 0; n < np; ++n) {
      h(j * np + n, j * np + n) = n * m.omega_r + m.level_energy(j);
    }
  }
  // g_{j,j+1} = sqrt(j + 1) g: g for 0-1, sqrt(2) g for 1-2.
  for (int j = 0; j + 1 < m.levels; ++j) {
    const double gj = std::sqrt(static_cast<double>(j + 1)) * m.g;
    for (int n = 1; n < np; ++n) {
      const int a = (j + 1) * np + (n - 1);
      const int b = j * np + n;
      const double x = gj * std::sqrt(static_cast<double>(n));
      h(a, b) = x;
      h(b, a) = x;
    }
  }
  return h;
}
}  // namespace detail

/// Real symmetric RWA Hamiltonian of dimension M (N + 1).
inline Eigen::MatrixXd build_hamiltonian(const JCModel& m) {
  m.validate();
  return detail::build_jc(m, m.fock_cutoff);
}

inline void require_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw PreconditionError("matrix must be square");
  const double norm = a.norm();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(norm, 1e-300)) {
    throw PreconditionError("matrix is not symmetric");
  }
}

/// Ascending eigenvalues of a real symmetric matrix.
inline Eigen::VectorXd diagonalize(const Eigen::MatrixXd& a) {
  require_symmetric(a);
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigensolver did not converge");
  return es.eigenvalues();
}

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

inline Eigensystem eigensystem(const Eigen::MatrixXd& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw SolverError("eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalue adiabatically connected to bare state |j, n>: the eigenvector
/// with the largest overlap, lower eigenvalue on ties. Overlap below 0.5 is
/// ambiguous.
inline double labelled_energy(const Eigensystem& es, const JCModel& m, int j, int n) {
  const int row = m.index(j, n);
  Eigen::Index best = 0;
  double best_overlap = -1.0;
  for (Eigen::Index c = 0; c < es.vectors.cols(); ++c) {
    const double ov = es.vectors(row, c) * es.vectors(row, c);
    if (ov > best_overlap) {
      best_overlap = ov;
      best = c;
    }
  }
  if (best_overlap < 0.5) {
    throw LabelAmbiguityError("bare state |" + std::to_string(j) + "," +
                              std::to_string(n) + "> has maximal overlap " +
                              std::to_string(best_overlap));
  }
  return es.values(best);
}

/// [(E(e,1) - E(e,0)) - (E(g,1) - E(g,0))] / 2.
inline double chi_numeric(const JCModel& m) {
  m.validate();
  const double delta = m.omega_q - m.omega_r;
  if (m.g > 0.0 && std::abs(m.g / delta) > 0.3) {
    throw PreconditionError("chi_numeric needs |g / Delta| <= 0.3");
  }
  const auto es = eigensystem(build_hamiltonian(m));
  const double eg0 = labelled_energy(es, m, 0, 0);
  const double eg1 = labelled_energy(es, m, 0, 1);
  const double ee0 = labelled_energy(es, m, 1, 0);
  const double ee1 = labelled_energy(es, m, 1, 1);
  return 0.5 * ((ee1 - ee0) - (eg1 - eg0));
}

/// JC single-excitation branches on the same grid as an SL sweep.
inline CrossingSweep jc_sweep(double omega_r, double g, const std::vector<double>& grid) {
  CrossingSweep out;
  out.points.reserve(grid.size());
  for (double wq : grid) {
    const auto [lo, hi] = dressed_two_level(omega_r, wq, g);
    out.points.push_back({wq, lo, hi});
  }
  return out;
}

struct SweepComparison {
  std::vector<double> diff_lo;  // jc - sl, rad/s
  std::vector<double> diff_hi;
  double max_abs_diff = 0.0;
  double rms_diff = 0.0;
  double max_gap_discrepancy = 0.0;  // max |gap_jc - gap_sl| / gap_jc
};

inline SweepComparison compare_with_sl(const CrossingSweep& jc, const CrossingSweep& sl) {
  if (jc.points.size() != sl.points.size()) {
    throw PreconditionError("sweep grids differ in length");
  }
  SweepComparison c;
  double sq = 0.0;
  for (std::size_t i = 0; i < jc.points.size(); ++i) {
    const auto& a = jc.points[i];
    const auto& b = sl.points[i];
    if (std::abs(a.omega_q - b.omega_q) > 1e-12 * std::abs(a.omega_q)) {
      throw PreconditionError("sweep grids differ at point " + std::to_string(i));
    }
    c.diff_lo.push_back(a.branch_lo - b.branch_lo);
    c.diff_hi.push_back(a.branch_hi - b.branch_hi);
    c.max_abs_diff = std::max({c.max_abs_diff, std::abs(c.diff_lo.back()),
                               std::abs(c.diff_hi.back())});
    sq += c.diff_lo.back() * c.diff_lo.back() + c.diff_hi.back() * c.diff_hi.back();
    if (a.gap() > 0.0) {
      c.max_gap_discrepancy =
          std::max(c.max_gap_discrepancy, std::abs(a.gap() - b.gap()) / a.gap());
    }
  }
  if (!jc.points.empty()) c.rms_diff = std::sqrt(sq / (2.0 * jc.points.size()));
  return c;
}

}  // namespace dressed_modes
