#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strainlimit/dynamics.hpp"
#include "strainlimit/errors.hpp"
#include "strainlimit/scenarios.hpp"

namespace strainlimit {

/// Config error naming the offending key and the line it was found on
/// (0 when the key is absent).
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& what, std::string key, int line)
      : InvalidInput(what), key(std::move(key)), line(line) {}
  std::string key;
  int line;
};

class MissingKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};
class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/**
 * Flat `key = value` run description. Keys and defaults:
 *
 *   dim [1]            1 or 2
 *   domain             "a b" (dim 1) or "a b c d" (dim 2), required
 *   cells              cell count (dim 1, required); in dim 2 the default for cells_x / cells_y
 *   cells_x, cells_y   cell counts of a rectangle
 *   model [prototype]  prototype | powerlaw | linear
 *   q [2], p [2]       prototype and power-law exponents (q >= 1, p > 1)
 *   alpha [1], beta [1]  > 0
 *   reg_n [16]         integer >= 1 or `none`
 *   reg_kind [linear]  linear | power (power needs p >= 2)
 *   scheme [midpoint]  midpoint | rk4
 *   dt, t_end          required; dt > 0, t_end >= 0
 *   scenario           gaussian-pluck | near-limit | standing-wave | manufactured:standing-wave |
 *                      manufactured:linear-ramp, required
 *   amplitude_scale [1]  multiplies the scenario amplitude
 *   seed [0]           perturbation seed for stability studies
 *   out_dir [./out]
 *   snapshot_every [0] write state_<t>.csv every k steps (0: first and last only)
 *   study              regularization | refinement | stability (sweep only)
 *   n_list [4 16 64 256], levels, axis [h] (h | dt), delta_list [1e-3 1e-5 1e-7]
 */
struct RunConfig {
  int dim = 1;
  std::vector<double> domain;
  std::vector<int> cells;
  std::string model = "prototype";
  double q = 2.0;
  double p = 2.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<int> reg_n = 16;
  std::string reg_kind = "linear";
  std::string scheme = "midpoint";
  double dt = 0.0;
  double t_end = 0.0;
  std::string scenario;
  double amplitude_scale = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir = "./out";
  int snapshot_every = 0;
  std::string study;
  std::vector<int> n_list{4, 16, 64, 256};
  std::vector<double> levels;
  std::string axis = "h";
  std::vector<double> delta_list{1e-3, 1e-5, 1e-7};

  bool operator==(const RunConfig&) const = default;

  MeshSpec mesh_spec() const;
  ConstitutiveModel constitutive_model() const;
  SolverConfig solver_config() const;
  /// Builds the named scenario; throws InvalidData when its data are inadmissible.
  Scenario build_scenario() const;
};

/// Parses and validates a config. Throws MissingKey, UnknownKey or RangeError.
RunConfig parse_config(std::string_view text);

/// Serialises every key; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace strainlimit
