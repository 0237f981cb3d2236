#include "sblue/predict.hpp"

#include <cmath>
#include <stdexcept>

#include "sblue/errors.hpp"

namespace sblue {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_moments(const Eigen::MatrixXd& corr) {
  const double mean_diag = corr.diagonal().mean();
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;

  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() == Eigen::Success) return llt;
  for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale; jitter *= 10.0) {
    Eigen::MatrixXd bumped = corr;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw SingularMoments("observation moment matrix is singular at maximum jitter");
}

Eigen::VectorXd stack_observations(const ObservationVector& obs) {
  Eigen::VectorXd y(obs.y_high.size() + obs.y_low.size());
  Eigen::Index i = 0;
  for (double v : obs.y_high) y(i++) = v;
  for (double v : obs.y_low) y(i++) = v;
  return y;
}

}  // namespace

Prediction predict(const MomentSet& ms, const ObservationVector& obs, double mu_f) {
  const Eigen::Index n = ms.cross.size();
  if (n == 0) {
    return {mu_f, ms.prior_var, ms.query_loc};
  }
  if (!obs.centered) {
    throw std::invalid_argument("predict: observations must be centered first");
  }
  const Eigen::VectorXd y = stack_observations(obs);
  if (y.size() != n) {
    throw ShapeMismatch("predict: observation vector does not match moment set");
  }
  const auto llt = factor_moments(ms.corr);
  const Eigen::VectorXd weights = llt.solve(ms.cross);
  const double estimate = mu_f + weights.dot(y - ms.mean);
  const double mse = std::max(0.0, ms.prior_var - weights.dot(ms.cross));
  return {estimate, mse, ms.query_loc};
}

double predictive_mse(const MomentSet& ms) {
  if (ms.cross.size() == 0) return ms.prior_var;
  const auto llt = factor_moments(ms.corr);
  return std::max(0.0, ms.prior_var - ms.cross.dot(llt.solve(ms.cross)));
}

ReconstructionGrid reconstruct_grid(const SensorDeployment& deployment,
                                    const ObservationVector& obs,
                                    const GridSpec& grid) {
  if (grid.nx < 1 || grid.ny < 1) {
    throw std::invalid_argument("reconstruct_grid: grid must be at least 1x1");
  }
  if (!obs.centered) {
    throw std::invalid_argument("reconstruct_grid: observations must be centered first");
  }
  const ObservationMoments om = assemble_observation_moments(deployment);
  if (static_cast<int>(obs.y_high.size()) != deployment.n_high() ||
      static_cast<int>(obs.y_low.size()) != deployment.n_low()) {
    throw ShapeMismatch("reconstruct_grid: observations do not match deployment");
  }
  const auto llt = factor_moments(om.corr);
  const Eigen::VectorXd residual = stack_observations(obs) - om.mean;
  const Eigen::VectorXd solved_residual = llt.solve(residual);
  const double mu_f = deployment.field.mean;

  ReconstructionGrid out;
  out.xs.resize(grid.nx);
  out.ys.resize(grid.ny);
  for (int i = 0; i < grid.nx; ++i) {
    out.xs[i] = grid.nx == 1 ? grid.x_min
                             : grid.x_min + (grid.x_max - grid.x_min) * i / (grid.nx - 1);
  }
  for (int j = 0; j < grid.ny; ++j) {
    out.ys[j] = grid.ny == 1 ? grid.y_min
                             : grid.y_min + (grid.y_max - grid.y_min) * j / (grid.ny - 1);
  }
  out.estimates.resize(grid.ny, grid.nx);
  out.mse.resize(grid.ny, grid.nx);

  Eigen::VectorXd cross;
  double prior_var = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Location cell{out.xs[i], out.ys[j]};
      fill_cross_vector(deployment, cell, cross, prior_var);
      out.estimates(j, i) = mu_f + cross.dot(solved_residual);
      out.mse(j, i) = std::max(0.0, prior_var - cross.dot(llt.solve(cross)));
    }
  }
  return out;
}

Eigen::MatrixXd rse_map(const ReconstructionGrid& grid, const Eigen::MatrixXd& truth) {
  if (truth.rows() != grid.estimates.rows() || truth.cols() != grid.estimates.cols()) {
    throw ShapeMismatch("rse_map: truth matrix shape does not match grid");
  }
  return (grid.estimates - truth).cwiseAbs();
}

double rmse(const ReconstructionGrid& grid, const Eigen::MatrixXd& truth) {
  if (truth.rows() != grid.estimates.rows() || truth.cols() != grid.estimates.cols()) {
    throw ShapeMismatch("rmse: truth matrix shape does not match grid");
  }
  const double mean_sq = (grid.estimates - truth).squaredNorm() /
                         static_cast<double>(truth.size());
  return std::sqrt(mean_sq);
}

}  // namespace sblue
