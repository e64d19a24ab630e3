#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kleinweyl/catalog.hpp"

namespace kleinweyl::harness {

inline constexpr int kSchemaVersion = 1;

const std::vector<std::string>& suite_names();

/// Absolute or relative tolerances per suite check; each is multiplied by
/// RunConfig::tolerance_scale when compared.
struct Tolerances {
  double weyl = 0.03;              ///< relative, analytic spectra
  double weyl_discretized = 0.05;  ///< relative
  double eigen = 1e-8;             ///< relative, discretized vs closed form
  double heat_a0 = 1e-3;           ///< absolute on the sphere, relative elsewhere x10
  double heat_a1 = 5e-3;           ///< absolute
  double heat_half = 1e-2;         ///< |a_half| / a0
  double heat_discretized = 0.05;  ///< relative a1 agreement on discretized spectra
  double identity = 1e-10;         ///< algebraic identities between normalisations
  double reduction = 1e-8;         ///< ultrastatic reduction, pointwise
  double expansion = 1e-4;         ///< Hadamard fits, scale-floored relative
  double invariance = 1e-6;        ///< shear invariance, relative
  double exact = 1e-12;            ///< exact finite invariants under the shear
  double variation = 1e-6;         ///< delta-rule deviation
  double variation_zero = 1e-8;    ///< vanishing variations
  double zeta = 1e-2;              ///< relative, Epstein-sum residue estimate
};

struct ShearSpec {
  TrigSeries f;
  double epsilon = 0.05;
};

struct ExpansionSpec {
  int points = 5;
  unsigned seed = 20240611;
  std::array<double, 2> t_window{1e-3, 0.2};
  int samples = 12;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  ModelSpec model;
  std::vector<int> grid;
  int truncation = 12;
  std::optional<std::array<double, 2>> t_window;
  std::optional<std::array<double, 2>> lambda_window;
  Tolerances tolerances;
  double tolerance_scale = 1.0;
  std::string output_dir = "kleinweyl-out";
  std::vector<std::string> suites;
  ShearSpec shear;
  ExpansionSpec expansion;
};

/// Parses and validates a JSON document; ConfigError on any problem, naming
/// the line or field involved.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Re-checks the invariants after command-line overrides.
void validate(RunConfig& config);

/// Fully populated configuration as JSON text.
std::string to_json(const RunConfig& config);

}  // namespace kleinweyl::harness
