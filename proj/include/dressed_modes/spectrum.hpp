#pragma once

// Roots of H(lambda) = G(lambda) - F(lambda) on (0, lambda_max].
//
// The domain is cut at every Dirichlet pole of G and every boundary pole of F
// with a nonzero residue. Inside each open interval H is continuous. Points
// are carried as (anchor, offset) pairs so that evaluation a few ulp from a
// pole still resolves the distance to it exactly.
//
// Near a pole the sign of H is known: +inf just right of a Dirichlet pole and
// -inf just left of it; sign(delta) right of a boundary pole and -sign(delta)
// left of it. When the clamped sample disagrees with that sign, a root sits
// between the clamp and the pole and is hunted down by shrinking probes.
//
// With every residue positive, G decreases and F increases between poles,
// so H is strictly monotone and each interval bounded by two poles holds
// exactly one root. Anything else is reported as an InterlacingError.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dressed_modes/boundary.hpp"
#include "dressed_modes/errors.hpp"
#include "dressed_modes/parallel.hpp"
#include "dressed_modes/params.hpp"
#include "dressed_modes/resonator.hpp"

namespace dressed_modes {

struct SolverSettings {
  int initial_grid = 64;
  int max_grid = 4096;
  double endpoint_clamp = 1e-8;      // relative to the pole location
  double bracket_tolerance = 1e-13;  // relative width at termination
  int newton_steps = 5;
  double residual_tolerance = 1e-8;  // times max(|G|, |F|, 1/L)
  double pole_coincidence = 1e-6;    // boundary vs Dirichlet pole guard
};

struct PartitionPole {
  enum class Source { dirichlet, boundary };
  double location = 0.0;
  Source source = Source::dirichlet;
  std::size_t index = 0;  // Dirichlet k, or position in the boundary's poles()
  double residue = 0.0;   // zero for Dirichlet poles
  std::string label;
};

struct DressedEigenvalue {
  double lambda = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |G - F| at lambda
  int iterations = 0;
  std::size_t interval = 0;
};

struct IntervalReport {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t root_count = 0;
  bool bounded_by_poles = false;  // both ends are poles
  bool interlacing_satisfied = false;
};

struct DressedSpectrum {
  std::vector<DressedEigenvalue> eigenvalues;
  std::vector<PartitionPole> pole_partition;
  std::vector<IntervalReport> intervals;
  double lambda_max = 0.0;
  bool residues_positive = true;

  std::vector<double> lambdas() const {
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (const auto& e : eigenvalues) out.push_back(e.lambda);
    return out;
  }

  /// Dressed angular frequencies v sqrt(lambda).
  std::vector<double> omegas(double velocity) const {
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (const auto& e : eigenvalues) out.push_back(velocity * std::sqrt(e.lambda));
    return out;
  }

  /// Eigenvalue closest to `lambda`. Throws if the spectrum is empty.
  double nearest(double lambda) const {
    if (eigenvalues.empty()) throw SolverError("spectrum is empty");
    double best = eigenvalues.front().lambda;
    for (const auto& e : eigenvalues) {
      if (std::abs(e.lambda - lambda) < std::abs(best - lambda)) best = e.lambda;
    }
    return best;
  }
};

/// Just below the sixth Dirichlet pole.
inline double default_lambda_max(double length) {
  const double q = 6.0 * std::numbers::pi / length;
  return q * q * (1.0 - 1e-6);
}

namespace detail {

// Point inside an interval: lambda = (side == 0 ? lo : hi) + offset.
struct IntervalPoint {
  int side = 0;
  double offset = 0.0;
};

template <class Boundary>
class IntervalSolver {
 public:
  IntervalSolver(const ResonatorFunction& res, const Boundary& b,
                 const SolverSettings& st, const PartitionPole* left,
                 const PartitionPole* right, double lo, double hi)
      : res_(res), b_(b), st_(st), left_(left), right_(right), lo_(lo), hi_(hi),
        width_(hi - lo) {}

  double lambda(const IntervalPoint& p) const {
    return (p.side == 0 ? lo_ : hi_) + p.offset;
  }

  // Position measured from the left end; loses the exact pole distance.
  double from_left(const IntervalPoint& p) const {
    return p.side == 0 ? p.offset : width_ + p.offset;
  }

  IntervalPoint at(double s) const {
    return s <= 0.5 * width_ ? IntervalPoint{0, s} : IntervalPoint{1, s - width_};
  }

  struct Eval {
    double g = 0.0;
    double f = 0.0;
    double h() const { return g - f; }
  };

  Eval eval(const IntervalPoint& p) const {
    const PartitionPole* anchor = p.side == 0 ? left_ : right_;
    const double x = lambda(p);
    const double length = res_.length();
    Eval e;
    if (anchor && anchor->source == PartitionPole::Source::dirichlet) {
      e.g = g_value_near_pole(anchor->location, p.offset, length);
    } else {
      e.g = g_value(x, length);
    }
    if (anchor && anchor->source == PartitionPole::Source::boundary) {
      e.f = b_.value_unchecked(x, anchor->index, p.offset);
    } else {
      e.f = b_.value_unchecked(x);
    }
    return e;
  }

  double slope(const IntervalPoint& p) const {
    const PartitionPole* anchor = p.side == 0 ? left_ : right_;
    const double x = lambda(p);
    const double length = res_.length();
    const double dg =
        (anchor && anchor->source == PartitionPole::Source::dirichlet)
            ? g_derivative_near_pole(anchor->location, p.offset, length)
            : g_derivative(x, length);
    const double df =
        (anchor && anchor->source == PartitionPole::Source::boundary)
            ? b_.derivative_unchecked(x, anchor->index, p.offset)
            : b_.derivative_unchecked(x);
    return dg - df;
  }

  // Sign of H approaching the left end from the right (+1/-1), 0 if the end
  // is not a pole.
  int left_asymptote() const {
    if (!left_) return 0;
    if (left_->source == PartitionPole::Source::dirichlet) return 1;
    return left_->residue > 0.0 ? 1 : -1;
  }
  int right_asymptote() const {
    if (!right_) return 0;
    if (right_->source == PartitionPole::Source::dirichlet) return -1;
    return right_->residue > 0.0 ? -1 : 1;
  }

  struct Sample {
    IntervalPoint p;
    double h = 0.0;
  };

  static int sign_of(double h) { return h < 0.0 ? -1 : 1; }

  // Samples at the clamped ends and n - 1 interior points, extended by pole
  // probes when a clamped end disagrees with the asymptotic sign.
  std::vector<Sample> sample(int n) const {
    std::vector<Sample> out;
    const double left_clamp =
        left_ ? st_.endpoint_clamp * left_->location : st_.endpoint_clamp * width_;
    const double right_clamp = right_ ? st_.endpoint_clamp * right_->location : 0.0;

    std::vector<IntervalPoint> pts;
    pts.push_back({0, left_clamp});
    for (int i = 1; i < n; ++i) {
      const double s = width_ * static_cast<double>(i) / n;
      if (s > left_clamp && s < width_ - right_clamp) pts.push_back(at(s));
    }
    pts.push_back({1, -right_clamp});
    for (const auto& p : pts) out.push_back({p, eval(p).h()});

    if (const int a = left_asymptote(); a != 0 && sign_of(out.front().h) != a) {
      if (auto probe = probe_pole(0, a)) out.insert(out.begin(), *probe);
    }
    if (const int a = right_asymptote(); a != 0 && sign_of(out.back().h) != a) {
      if (auto probe = probe_pole(1, a)) out.push_back(*probe);
    }
    return out;
  }

  // Walks offsets 1e-9 .. 1e-30 (relative) toward the pole until H takes the
  // asymptotic sign.
  std::optional<Sample> probe_pole(int side, int asymptote) const {
    const double pole = side == 0 ? left_->location : right_->location;
    for (int e = 9; e <= 30; ++e) {
      const double off = pole * std::pow(10.0, -e);
      const IntervalPoint p{side, side == 0 ? off : -off};
      const double h = eval(p).h();
      if (sign_of(h) == asymptote) return Sample{p, h};
    }
    throw SolverError("root within 1e-30 relative of pole at lambda=" +
                      std::to_string(pole) + " could not be separated");
  }

  static std::size_t count_changes(const std::vector<Sample>& s) {
    std::size_t c = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (sign_of(s[i - 1].h) != sign_of(s[i].h)) ++c;
    }
    return c;
  }

  DressedEigenvalue refine(Sample a, Sample b) const {
    const double l_lo = lambda(a.p);
    const double l_hi = lambda(b.p);
    int iterations = 0;
    const int sa = sign_of(a.h);
    for (; iterations < 400; ++iterations) {
      const bool same_side = a.p.side == b.p.side;
      const double width = same_side ? std::abs(b.p.offset - a.p.offset)
                                     : from_left(b.p) - from_left(a.p);
      // Width is judged against the distance to the anchoring end so that
      // roots hugging a pole are still pinned to full relative accuracy.
      const double scale = std::min(
          std::abs(lambda(a.p)),
          std::max(std::abs(a.p.offset), std::abs(b.p.offset)));
      if (width <= st_.bracket_tolerance * scale) break;
      IntervalPoint mid;
      if (same_side) {
        mid = {a.p.side, 0.5 * (a.p.offset + b.p.offset)};
      } else {
        mid = at(0.5 * (from_left(a.p) + from_left(b.p)));
      }
      if ((mid.side == a.p.side && mid.offset == a.p.offset) ||
          (mid.side == b.p.side && mid.offset == b.p.offset)) {
        break;  // no representable midpoint left
      }
      const double hm = eval(mid).h();
      if (sign_of(hm) == sa) {
        a = {mid, hm};
      } else {
        b = {mid, hm};
      }
    }

    Sample best = std::abs(a.h) <= std::abs(b.h) ? a : b;
    for (int k = 0; k < st_.newton_steps; ++k) {
      if (best.h == 0.0) break;
      const double d = slope(best.p);
      if (!(d != 0.0) || !std::isfinite(d)) break;
      IntervalPoint trial{best.p.side, best.p.offset - best.h / d};
      const double lo_s = std::min(from_left(a.p), from_left(b.p));
      const double hi_s = std::max(from_left(a.p), from_left(b.p));
      const double ts = from_left(trial);
      if (ts < lo_s || ts > hi_s) break;
      const double ht = eval(trial).h();
      ++iterations;
      if (!(std::abs(ht) < std::abs(best.h))) break;
      best = {trial, ht};
    }

    const Eval e = eval(best.p);
    const double scale =
        std::max({std::abs(e.g), std::abs(e.f), 1.0 / res_.length()});
    const double residual = std::abs(e.h());
    if (!(residual <= st_.residual_tolerance * scale)) {
      throw SolverError("root residual " + std::to_string(residual) +
                        " exceeds tolerance near lambda=" +
                        std::to_string(lambda(best.p)));
    }
    DressedEigenvalue out;
    out.lambda = lambda(best.p);
    out.bracket_lo = std::min(l_lo, l_hi);
    out.bracket_hi = std::max(l_lo, l_hi);
    out.residual = residual;
    out.iterations = iterations;
    return out;
  }

  std::vector<DressedEigenvalue> roots(const std::vector<Sample>& s) const {
    std::vector<DressedEigenvalue> out;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (sign_of(s[i - 1].h) != sign_of(s[i].h)) out.push_back(refine(s[i - 1], s[i]));
    }
    return out;
  }

 private:
  const ResonatorFunction& res_;
  const Boundary& b_;
  const SolverSettings& st_;
  const PartitionPole* left_;
  const PartitionPole* right_;
  double lo_;
  double hi_;
  double width_;
};

}  // namespace detail

/// Merged, sorted poles of G and F below lambda_max. Zero-residue boundary
/// poles are not singular and are left out.
///
/// `Boundary` is RationalBoundary or FullSusceptanceBoundary; both expose
/// their singularities as BoundaryPole records.
template <class Boundary>
std::vector<PartitionPole> pole_partition(const ResonatorFunction& res,
                                          const Boundary& b,
                                                 double lambda_max) {
  std::vector<PartitionPole> poles;
  for (int k = 1;; ++k) {
    const double p = res.dirichlet(k).value();
    if (p >= lambda_max) break;
    poles.push_back({p, PartitionPole::Source::dirichlet, static_cast<std::size_t>(k),
                     0.0, "dirichlet-" + std::to_string(k)});
  }
  for (std::size_t i = 0; i < b.poles().size(); ++i) {
    const auto& bp = b.poles()[i];
    if (bp.residue == 0.0 || bp.location >= lambda_max) continue;
    poles.push_back({bp.location, PartitionPole::Source::boundary, i, bp.residue,
                     bp.label});
  }
  std::sort(poles.begin(), poles.end(),
            [](const auto& x, const auto& y) { return x.location < y.location; });
  return poles;
}

/// All roots of G - F in (0, lambda_max].
template <class Boundary>
DressedSpectrum find_eigenvalues(const ResonatorFunction& res, const Boundary& b,
                                 double lambda_max, const SolverSettings& st = {}) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw PreconditionError("lambda_max must be positive");
  }
  // Generic position: no transition may sit on a Dirichlet eigenvalue.
  for (const auto& bp : b.poles()) {
    if (bp.residue == 0.0) continue;
    const double k = std::round(std::sqrt(bp.location) * res.length() / std::numbers::pi);
    if (k < 1.0) continue;
    const double d = res.dirichlet(static_cast<int>(k)).value();
    if (std::abs(bp.location - d) <= st.pole_coincidence * d) {
      throw PreconditionError("boundary pole '" + bp.label +
                              "' coincides with Dirichlet pole k=" +
                              std::to_string(static_cast<int>(k)));
    }
  }

  DressedSpectrum spec;
  spec.lambda_max = lambda_max;
  spec.residues_positive = b.residues_nonnegative();
  spec.pole_partition = pole_partition(res, b, lambda_max);
  if (spec.pole_partition.empty() || spec.pole_partition.front().location >= lambda_max) {
    throw PreconditionError("lambda_max must exceed the smallest pole");
  }

  const auto& poles = spec.pole_partition;
  const std::size_t n_intervals = poles.size() + 1;
  for (std::size_t i = 0; i < n_intervals; ++i) {
    const PartitionPole* left = i == 0 ? nullptr : &poles[i - 1];
    const PartitionPole* right = i < poles.size() ? &poles[i] : nullptr;
    const double lo = left ? left->location : 0.0;
    const double hi = right ? right->location : lambda_max;
    if (!right && hi - lo <= st.endpoint_clamp * lo) continue;  // empty tail

    detail::IntervalSolver<Boundary> solver(res, b, st, left, right, lo, hi);
    const bool bounded = left && right;

    int n = st.initial_grid;
    auto samples = solver.sample(n);
    std::size_t count = solver.count_changes(samples);
    if (spec.residues_positive) {
      const auto acceptable = [&](std::size_t c) { return bounded ? c == 1 : c <= 1; };
      while (!acceptable(count) && n < st.max_grid) {
        n *= 2;
        samples = solver.sample(n);
        count = solver.count_changes(samples);
      }
      if (!acceptable(count)) {
        throw InterlacingError("interval (" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + ") holds " +
                                   std::to_string(count) + " roots",
                               lo, hi, count);
      }
    } else {
      while (n < st.max_grid) {
        auto finer = solver.sample(n * 2);
        const std::size_t c2 = solver.count_changes(finer);
        n *= 2;
        const bool stable = c2 == count;
        samples = std::move(finer);
        count = c2;
        if (stable) break;
      }
    }

    auto found = solver.roots(samples);
    for (auto& r : found) {
      r.interval = i;
      spec.eigenvalues.push_back(r);
    }
    spec.intervals.push_back({lo, hi, found.size(), bounded,
                              bounded ? found.size() == 1 : found.size() <= 1});
  }
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
            [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  return spec;
}

template <class Boundary>
DressedSpectrum find_eigenvalues(const ResonatorFunction& res, const Boundary& b) {
  return find_eigenvalues(res, b, default_lambda_max(res.length()));
}

/// Smallest |lambda~ - lambda_k| / lambda_k over eigenvalues and singular
/// boundary poles; +inf when there are none.
template <class Boundary>
double level_repulsion_margin(const DressedSpectrum& spec, const Boundary& b) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& e : spec.eigenvalues) {
    for (const auto& p : b.poles()) {
      if (p.residue == 0.0) continue;
      margin = std::min(margin, std::abs(e.lambda - p.location) / p.location);
    }
  }
  return margin;
}

// ---------------------------------------------------------------------------
// Avoided-crossing sweeps

struct SweepPoint {
  double omega_q = 0.0;
  double branch_lo = 0.0;  // rad/s
  double branch_hi = 0.0;
  double gap() const { return branch_hi - branch_lo; }
};

struct CrossingSweep {
  std::vector<SweepPoint> points;
};

namespace detail {

// The two dressed frequencies straddling the qubit transition. With g = 0
// the transition is not a pole; the pair is then the bare qubit and the
// resonator mode nearest the fundamental.
inline SweepPoint straddling_pair(const DeviceParams& dev, const TransmonSpec& spec,
                                  int levels, double lambda_max) {
  const ResonatorFunction res(dev.length());
  const auto b = boundary_for_state(spec, dev, levels);
  const auto spectrum = find_eigenvalues(res, b, lambda_max);
  const double v = dev.velocity();
  const double lq = omega_to_lambda(spec.omega_q, v).value();
  SweepPoint pt;
  pt.omega_q = spec.omega_q;

  const bool decoupled = b.poles().front().residue == 0.0;
  if (decoupled) {
    const double w = v * std::sqrt(spectrum.nearest(dev.fundamental_lambda().value()));
    pt.branch_lo = std::min(w, spec.omega_q);
    pt.branch_hi = std::max(w, spec.omega_q);
    return pt;
  }
  std::optional<double> lo;
  std::optional<double> hi;
  for (const auto& e : spectrum.eigenvalues) {
    if (e.lambda < lq) lo = e.lambda;
    if (e.lambda > lq && !hi) hi = e.lambda;
  }
  if (!lo || !hi) {
    throw SolverError("no dressed pair straddles the qubit transition");
  }
  pt.branch_lo = v * std::sqrt(*lo);
  pt.branch_hi = v * std::sqrt(*hi);
  return pt;
}

}  // namespace detail

/// Rebuilds the boundary at every grid frequency and records the two
/// branches around the transition. Points run in parallel; errors carry the
/// grid index.
inline CrossingSweep sweep_qubit_frequency(const DeviceParams& dev,
                                           const TransmonSpec& spec_template,
                                           const std::vector<double>& omega_q_grid,
                                           QubitState state, int levels = 3,
                                           std::optional<double> lambda_max = {}) {
  for (std::size_t i = 1; i < omega_q_grid.size(); ++i) {
    if (!(omega_q_grid[i] > omega_q_grid[i - 1])) {
      throw PreconditionError("sweep grid must be strictly increasing");
    }
  }
  const double lmax = lambda_max.value_or(default_lambda_max(dev.length()));
  CrossingSweep sweep;
  sweep.points.resize(omega_q_grid.size());
  parallel_for(omega_q_grid.size(), [&](std::size_t i) {
    try {
      const auto spec = spec_template.with_state(state).with_frequency(omega_q_grid[i]);
      sweep.points[i] = detail::straddling_pair(dev, spec, levels, lmax);
    } catch (const PreconditionError& e) {
      throw PreconditionError("sweep point " + std::to_string(i) + ": " + e.what());
    } catch (const Error& e) {
      throw SolverError("sweep point " + std::to_string(i) + ": " + e.what());
    }
  });
  return sweep;
}

/// Inclusive START:STOP:COUNT grid.
inline std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  if (count == 0) throw PreconditionError("grid count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) /
                         static_cast<double>(count - 1);
  }
  out.back() = stop;
  return out;
}

struct RabiSplitting {
  double measured = 0.0;     // numerically found gap, rad/s
  double closed_form = 0.0;  // (v^2 / omega_q) sqrt(2 delta / L)
  double coupling = 0.0;     // g, rad/s
};

/// Gap between the dressed pair with the qubit tuned onto the fundamental.
/// Only the ground state has the single-pole structure the closed form
/// describes.
inline RabiSplitting rabi_splitting(const DeviceParams& dev, const TransmonSpec& spec,
                                    QubitState state = QubitState::g) {
  if (state != QubitState::g) {
    throw PreconditionError("vacuum Rabi splitting is defined for the ground state");
  }
  const double wr = dev.fundamental_omega();
  if (std::abs(spec.omega_q - wr) > 1e-9 * wr) {
    throw PreconditionError("qubit must be tuned to the fundamental frequency");
  }
  const auto s = spec.with_state(state);
  const auto pair = detail::straddling_pair(dev, s, 3, default_lambda_max(dev.length()));
  const double g = resolve_coupling(s, dev);
  const double v = dev.velocity();
  const double delta = residue_from_g(g, s.omega_q, dev.length(), v);
  RabiSplitting out;
  out.measured = pair.gap();
  out.closed_form = v * v / s.omega_q * std::sqrt(2.0 * delta / dev.length());
  out.coupling = g;
  return out;
}

}  // namespace dressed_modes
