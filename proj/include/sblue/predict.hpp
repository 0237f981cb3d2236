#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sblue/moments.hpp"
#include "sblue/sensors.hpp"

namespace sblue {

/// Point estimate and predictive mean-squared error at one location.
/// `estimate` is in raw field units (the field mean is added back).
struct Prediction {
  double estimate = 0.0;
  double mse = 0.0;
  Location location;
};

struct GridSpec {
  double x_min = 0.0, x_max = 1.0;
  int nx = 1;
  double y_min = 0.0, y_max = 1.0;
  int ny = 1;
};

/// Reconstruction over a rectangular grid. Matrices are indexed (row = y
/// index, col = x index).
struct ReconstructionGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  Eigen::MatrixXd estimates;
  Eigen::MatrixXd mse;
};

/// Linear estimate mu_f + q' Q^{-1} (y - m) with MSE k** - q' Q^{-1} q.
/// Observations must be centered. Throws SingularMoments when the
/// second-moment matrix cannot be factorized at maximum jitter.
Prediction predict(const MomentSet& ms, const ObservationVector& obs, double mu_f);

/// Predictive MSE alone; consumes no observations.
double predictive_mse(const MomentSet& ms);

/// Per-cell prediction over the grid with a single shared factorization of
/// the observation moment matrix (it does not depend on the query location).
ReconstructionGrid reconstruct_grid(const SensorDeployment& deployment,
                                    const ObservationVector& obs,
                                    const GridSpec& grid);

/// Point-wise |estimate - truth|.
Eigen::MatrixXd rse_map(const ReconstructionGrid& grid, const Eigen::MatrixXd& truth);

/// Root mean squared error over the grid.
double rmse(const ReconstructionGrid& grid, const Eigen::MatrixXd& truth);

}  // namespace sblue
