#pragma once

#include <stdexcept>
#include <string>

namespace sblue {

/// Series and quadrature both failed to reach the requested tolerance.
class NonConvergence : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cholesky factorization failed after the jitter schedule was exhausted.
class FactorizationFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Observation second-moment matrix could not be factorized at max jitter.
class SingularMoments : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// center_observations called on an already-centered vector.
class DoubleCentering : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid/matrix dimensions disagree.
class ShapeMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV row could not be parsed; carries the 1-based line number.
class MalformedRow : public std::runtime_error {
 public:
  MalformedRow(const std::string& file, long line, const std::string& detail)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + detail),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Footprint record references a grid id absent from the grid file.
class UnresolvedGridId : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data carries no usable signal (e.g. constant field values).
class DegenerateData : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration requested beyond the instance-size guard.
class InstanceTooLarge : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file or override is invalid.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sblue
