#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltlab/boxsim.hpp"
#include "ltlab/physcore.hpp"

namespace ltlab::cli {

using json = nlohmann::json;

/// The shipped config schema (embedded at build time).
const json& config_schema();

/// Validates against the JSON Schema subset the shipped schemas use: type,
/// properties, required, additionalProperties, enum, minimum, maximum,
/// exclusiveMinimum, items, minItems, maxItems. Throws ConfigError naming
/// the offending JSON pointer.
void validate_schema(const json& doc, const json& schema);

struct ExperimentConfig {
  json raw;
  int d = 1;
  int q = 1;
  double mu = 1.0;
  std::optional<double> T;
  std::optional<double> L;
  int n_max = 0;
  json potential_spec = json::object();
  std::string sweep_kind;
  std::vector<double> levels;
  int count = 4;
  double w0 = 0.05;
  double points_per_width = 6.0;
  std::vector<double> omega_lo;
  std::vector<double> omega_width;
  double e = 0.5;
  int margin = 0;
  bool density_csv = false;
  bool plot = false;
  std::uint64_t seed = 0;

  physcore::PhysicsParams params() const { return {d, q, mu}; }
  /// Expands the named family (if any) for box side L, then applies the
  /// explicit modes on top.
  boxsim::FourierPotential potential(double L) const;
  /// Gaussian-bump parameters (a, sigma) for sweeps that need a fixed
  /// physical profile; ConfigError if the family is something else.
  std::pair<double, double> gaussian_parameters() const;
};

ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);

/// Half-spectrum listing {n, re, im} of a potential, in index order.
json potential_to_json(const boxsim::FourierPotential& V);

}  // namespace ltlab::cli
