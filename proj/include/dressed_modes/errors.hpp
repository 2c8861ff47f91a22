#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dressed_modes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configuration file could not be read or failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested too close to a singularity.
///
/// `index` is the Dirichlet index k for resonator poles and the zero-based
/// pole position for boundary poles.
class PoleProximityError : public Error {
 public:
  PoleProximityError(const std::string& what, std::size_t index, double pole)
      : Error(what), index_(index), pole_(pole) {}

  std::size_t index() const noexcept { return index_; }
  double pole() const noexcept { return pole_; }

 private:
  std::size_t index_;
  double pole_;
};

/// Positive-residue spectrum whose inter-pole interval does not hold exactly
/// one eigenvalue.
class InterlacingError : public Error {
 public:
  InterlacingError(const std::string& what, double lo, double hi,
                   std::size_t count)
      : Error(what), lo_(lo), hi_(hi), count_(count) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t count() const noexcept { return count_; }

 private:
  double lo_;
  double hi_;
  std::size_t count_;
};

/// Root refinement did not meet its residual target.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Dressed-state labelling by bare-state overlap was not unique.
class LabelAmbiguityError : public Error {
 public:
  using Error::Error;
};

}  // namespace dressed_modes
