#pragma once

#include <stdexcept>
#include <string>

namespace mmcurv {

/// Base class for every error raised by the library. Each subclass maps to
/// one failure family so callers (the CLI in particular) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric is not symmetric positive definite at some evaluated point.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// A stencil or flow would leave a non-periodic chart axis.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// A density evaluated to a non-positive value.
class DensityError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric parameter (q <= 0, bad step, unknown option value, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a chart shape it was not given (e.g. a non-periodic
/// axis in a global integral).
class UnsupportedDomainError : public Error {
 public:
  using Error::Error;
};

/// The measure-preservation hypothesis needed by an identity does not hold.
class HypothesisUnmetError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, expression, or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Internal numerical consistency check failed (e.g. A not antisymmetric).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmcurv

namespace mmcurv {

/// Flow integration would leave the chart for the requested time step.
class StepSizeError : public BoundaryError {
 public:
  using BoundaryError::BoundaryError;
};

}  // namespace mmcurv
