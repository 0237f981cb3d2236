#pragma once

#include <Eigen/Dense>

#include "sblue/sensors.hpp"

namespace sblue {

/// Activation threshold expressed in units of the field's marginal standard
/// deviation at a sensor.
struct StandardizedThreshold {
  double t_std = 0.0;
};

/// T / sqrt(C_f(x, x)) for the centered model. Requires positive variance.
StandardizedThreshold standardize_threshold(double centered_threshold,
                                            double field_variance);

/// First and second moments of the joint (test point, observations) vector
/// for the centered model. `cross` is E[f* Y], `corr` the uncentered second
/// moment E[Y Y^T], `mean` is E[Y]; the high block precedes the low block.
struct MomentSet {
  Eigen::VectorXd cross;
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  double prior_var = 0.0;
  Location query_loc;
  int n_high = 0;
};

// Entry formulas below are for the zero-mean field model: callers pass the
// centered threshold T - mu_f, matching observations centered by mu_f (the
// activation event f_raw >= T is exactly f_centered >= T - mu_f).

/// E[f* Y_H(x_k)]: plain kernel cross-covariance.
double cross_corr_high(const GPFieldModel& field, const Location& x_star,
                       const Location& x_k);

/// E[f* Y_L(x_k)]: kernel cross-covariance damped by the activation factor
/// 1 - Phi(t) + t phi(t).
double cross_corr_low(const GPFieldModel& field, const Location& x_star,
                      const Location& x_k, double centered_threshold);

/// E[Y_H(x_k) Y_H(x_j)]: kernel value plus sigma_w^2 on the diagonal only.
double corr_high_high(const GPFieldModel& field, const Location& x_k,
                      const Location& x_j, bool same_sensor, double sigma_w);

/// E[Y_H(x_k) Y_L(x_j)]: kernel value damped by the activation factor of the
/// low sensor.
double corr_high_low(const GPFieldModel& field, const Location& x_k_high,
                     const Location& x_j_low, double centered_threshold);

/// E[Y_L(x_k)^2]: truncated second moment of the field plus the expected
/// heteroscedastic noise variance.
double corr_low_auto(const GPFieldModel& field, const LGPEnergyModel& energy,
                     LinkFunction link, const Location& x_k,
                     double centered_threshold);

/// E[Y_L(x_k) Y_L(x_j)], distinct locations: scaled truncated cross moment of
/// the standardized field pair.
double corr_low_low(const GPFieldModel& field, const Location& x_k,
                    const Location& x_j, double centered_threshold);

/// E[Y_H] for the centered model.
double mean_high();

/// E[Y_L(x_k)] = sqrt(C_f(x_k, x_k)) phi(t).
double mean_low(const GPFieldModel& field, const Location& x_k,
                double centered_threshold);

/// All blocks for a deployment and query location. The lower triangle of
/// `corr` is computed once and mirrored, so the matrix is exactly symmetric.
MomentSet assemble_moments(const SensorDeployment& deployment,
                           const Location& x_star);

/// Zero-sensor MomentSet: prediction falls back to the prior.
MomentSet prior_only_moments(const GPFieldModel& field, const Location& x_star);

/// Observation-only moments (corr, mean): independent of the query location,
/// so grid reconstruction and repeated selection reuse them.
struct ObservationMoments {
  Eigen::MatrixXd corr;
  Eigen::VectorXd mean;
  int n_high = 0;
};

ObservationMoments assemble_observation_moments(const SensorDeployment& deployment);

/// Query-dependent part: cross vector and prior variance at x_star.
void fill_cross_vector(const SensorDeployment& deployment, const Location& x_star,
                       Eigen::VectorXd& cross, double& prior_var);

}  // namespace sblue
