#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sblue/predict.hpp"
#include "sblue/select.hpp"
#include "sblue/sensors.hpp"

namespace sblue {

/// Region sensors are deployed in (and default grid extent).
struct Region {
  double x_min = 0.0, x_max = 5.0;
  double y_min = 0.0, y_max = 5.0;
};

/// Full run configuration parsed from a flat key=value file plus command-line
/// overrides. Exactly one deployment source (inline counts or CSV path) must
/// be given; the seed is mandatory.
struct RunConfig {
  GPFieldModel field;
  LGPEnergyModel energy;
  LinkFunction link = LinkFunction::Reciprocal;
  double sigma_w = 1.0;
  double threshold = 0.0;
  std::optional<std::pair<int, int>> deployment_counts;  // n_high, n_low
  std::optional<std::string> deployment_csv;
  Region region;
  GridSpec grid{0.0, 5.0, 50, 0.0, 5.0, 50};
  CEConfig ce;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

/// Parses the key=value file (# comments, blank lines allowed), applies
/// overrides of the form "key=value", validates. Throws ConfigError.
RunConfig parse_config(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Parses from already-loaded key/value pairs (used by `parse_config` and by
/// tests that build configs in memory).
RunConfig config_from_pairs(const std::map<std::string, std::string>& pairs);

/// FNV-1a over the canonical (sorted key=value) form; recorded in output
/// provenance lines so runs can be traced to their exact configuration.
std::uint64_t config_hash(const std::map<std::string, std::string>& pairs);

/// The canonical pair form of a parsed config (after overrides).
std::map<std::string, std::string> config_pairs(const std::filesystem::path& path,
                                                const std::vector<std::string>& overrides);

/// Materializes the deployment: loads the CSV or places counts uniformly at
/// random in the region using a generator seeded only by `seed` (so every
/// subcommand sees the same geometry for the same config).
SensorDeployment build_deployment(const RunConfig& config);

}  // namespace sblue
