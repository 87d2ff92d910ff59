#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace hpi {

/// A parameter lies outside the domain of an operation. Carries the name of
/// the offending parameter and, where meaningful, the bound that was crossed.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string parameter, const std::string& message,
              double bound = std::numeric_limits<double>::quiet_NaN())
      : std::domain_error(parameter + ": " + message),
        parameter_(std::move(parameter)),
        bound_(bound) {}

  const std::string& parameter() const noexcept { return parameter_; }
  double bound() const noexcept { return bound_; }

 private:
  std::string parameter_;
  double bound_;
};

/// A root finder or consistency check failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid lattice extents or run parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Not enough samples for the requested estimator.
class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The configuration does not carry a single open contour.
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Snapshot file missing, truncated or of the wrong format.
class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hpi
