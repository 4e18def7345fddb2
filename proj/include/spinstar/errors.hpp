#pragma once

#include <stdexcept>
#include <string>

namespace spinstar {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside its mathematical domain (index range, bad
/// normalization, unsupported size).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Register layout violation: overlapping or incomplete qubit index sets.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible registers.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid protocol configuration (copy count, coupling signs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A model assumption does not hold for the given parameters, so the
/// requested reduction is invalid.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// File input/output failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to reach the requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A level expected to be nondegenerate was found (numerically) degenerate.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double gap)
      : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace spinstar
