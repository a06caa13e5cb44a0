#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace strainlimit {

struct PropertyResult {
  std::string group;
  std::string name;
  bool passed = false;
  /// Worst observed value of the checked quantity and the bound it was held to.
  double worst = 0.0;
  double bound = 0.0;
  long samples = 0;
};

struct PropertyOptions {
  /// Random samples per model variant and dimension.
  int samples = 1000;
  std::uint64_t seed = 20240611;
};

/// Monotonicity, |G| <= L, inversion round trips (radial and tensor Newton),
/// Fenchel residuals, Jacobian finite differences and the Jacobian norm bound,
/// sampled over several model variants in d = 1, 2, 3.
std::vector<PropertyResult> constitutive_properties(const PropertyOptions& options);

/// Hand-computed values of the prototype and power-law maps.
std::vector<PropertyResult> closed_form_values();

/// Initial, boundary and strain-expression identities of both lift recipes at
/// `samples` space-time points in d = 1 and d = 2.
std::vector<PropertyResult> lift_properties(int samples, std::uint64_t seed = 7);

/// Everything above.
std::vector<PropertyResult> property_suite(const PropertyOptions& options);

/// One line per result; returns true when all passed.
bool print_results(std::ostream& out, const std::vector<PropertyResult>& results);

}  // namespace strainlimit
