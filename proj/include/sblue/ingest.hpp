#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sblue/field_model.hpp"

namespace sblue {

struct GridPoint {
  long grid_id = 0;
  double lon = 0.0;
  double lat = 0.0;
};

struct FootprintRow {
  long grid_id = 0;
  double gust = 0.0;  // max 3-second gust, m/s
};

/// Storm footprint joined against its grid-location table. Locations are
/// consumed as given (already on the rotated regular grid).
struct StormDataset {
  std::vector<GridPoint> grid;
  std::vector<FootprintRow> footprints;

  /// Joined locations in footprint order.
  std::vector<Location> locations() const;
  std::vector<double> values() const;
};

/// Parses `grid_id,lon,lat` and `grid_id,gust_ms` CSV files (header row
/// required, LF or CRLF). Throws MalformedRow with the offending line number
/// and UnresolvedGridId listing footprint ids without a grid entry.
StormDataset parse_storm(const std::filesystem::path& grid_file,
                         const std::filesystem::path& footprint_file);

/// Writes the dataset back out in the same two-file format.
void write_storm(const StormDataset& data, const std::filesystem::path& grid_file,
                 const std::filesystem::path& footprint_file);

struct FitResult {
  SeparableExponential kernel;
  double nugget = 1e-2;
  double log_likelihood = 0.0;
  bool converged = false;
};

/// Maximum-likelihood fit of the separable exponential kernel plus a noise
/// nugget, by cyclic coordinate search over log-parameters. Values are
/// centered by their sample mean before the likelihood is formed; datasets
/// beyond 400 points are subsampled (seeded, without replacement). `budget`
/// caps likelihood evaluations. Throws DegenerateData on constant values.
FitResult fit_separable_mle(std::span<const Location> locs,
                            std::span<const double> values, const FitResult& init,
                            int budget = 2000);

/// Gaussian log marginal likelihood of mean-centered values under the given
/// kernel + nugget. Exposed for optimizer-contract tests.
double separable_log_likelihood(std::span<const Location> locs,
                                std::span<const double> centered_values,
                                const SeparableExponential& kernel, double nugget);

}  // namespace sblue
