#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace strainlimit {

/// Marker for quantities that are infinite by construction (limit value L of a
/// non-limiting potential, conjugate energy past the strain limit, ...).
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double x) { return x == kUnbounded; }

/// Non-finite or otherwise malformed numerical input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a precondition (dimension mismatch, missing history, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Problem data that violate a modelling requirement (safety strain
/// condition, boundary compatibility, ...).
class InvalidData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// G has no inverse at the requested strain: no regulariser and |E| >= L.
class NoRegularizerAndSupercritical : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Implicit midpoint Newton loop failed; `trace` holds the update norms.
class MidpointNoConvergence : public NonConvergence {
 public:
  MidpointNoConvergence(const std::string& what, std::vector<double> trace)
      : NonConvergence(what), trace(std::move(trace)) {}
  std::vector<double> trace;
};

/// Failure during time integration, annotated with time and quadrature point.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strainlimit
