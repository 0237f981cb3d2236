#include "sblue/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "sblue/errors.hpp"
#include "sblue/gaussmath.hpp"

namespace sblue {

namespace {

using gaussmath::std_normal_cdf;
using gaussmath::std_normal_pdf;

// 1 - Phi(t) + t phi(t): the factor by which threshold activation damps every
// cross moment involving a low-quality observation.
double activation_factor(double t) {
  return 1.0 - std_normal_cdf(t) + t * std_normal_pdf(t);
}

double field_variance_at(const GPFieldModel& field, const Location& x) {
  return kernel_eval(field.kernel, x, x);
}

// Correlations within 1e-12 of +-1 are treated as a common standardized
// variable; the bivariate machinery degenerates there.
constexpr double kCoincidentRho = 1.0 - 1e-12;

// E[Z^2 1(Z >= t)] for a standard normal.
double truncated_second_moment(double t) { return activation_factor(t); }

}  // namespace

StandardizedThreshold standardize_threshold(double centered_threshold,
                                            double field_variance) {
  if (!(field_variance > 0.0)) {
    throw std::invalid_argument("standardize_threshold: field variance must be positive");
  }
  return {centered_threshold / std::sqrt(field_variance)};
}

double cross_corr_high(const GPFieldModel& field, const Location& x_star,
                       const Location& x_k) {
  return kernel_eval(field.kernel, x_star, x_k);
}

double cross_corr_low(const GPFieldModel& field, const Location& x_star,
                      const Location& x_k, double centered_threshold) {
  const double var_k = field_variance_at(field, x_k);
  const double t = standardize_threshold(centered_threshold, var_k).t_std;
  return kernel_eval(field.kernel, x_star, x_k) * activation_factor(t);
}

double corr_high_high(const GPFieldModel& field, const Location& x_k,
                      const Location& x_j, bool same_sensor, double sigma_w) {
  return kernel_eval(field.kernel, x_k, x_j) +
         (same_sensor ? sigma_w * sigma_w : 0.0);
}

double corr_high_low(const GPFieldModel& field, const Location& x_k_high,
                     const Location& x_j_low, double centered_threshold) {
  const double var_j = field_variance_at(field, x_j_low);
  const double t = standardize_threshold(centered_threshold, var_j).t_std;
  return kernel_eval(field.kernel, x_k_high, x_j_low) * activation_factor(t);
}

double corr_low_auto(const GPFieldModel& field, const LGPEnergyModel& energy,
                     LinkFunction link, const Location& x_k,
                     double centered_threshold) {
  const double var_k = field_variance_at(field, x_k);
  const double t = standardize_threshold(centered_threshold, var_k).t_std;
  return var_k * truncated_second_moment(t) +
         noise_variance_expectation(energy, link, x_k);
}

double corr_low_low(const GPFieldModel& field, const Location& x_k,
                    const Location& x_j, double centered_threshold) {
  const double var_k = field_variance_at(field, x_k);
  const double var_j = field_variance_at(field, x_j);
  if (!(var_k > 0.0) || !(var_j > 0.0)) {
    throw std::invalid_argument("corr_low_low: field variances must be positive");
  }
  const double scale = std::sqrt(var_k * var_j);
  const double t_k = centered_threshold / std::sqrt(var_k);
  const double t_j = centered_threshold / std::sqrt(var_j);
  const double rho = kernel_eval(field.kernel, x_k, x_j) / scale;

  if (rho >= kCoincidentRho) {
    // Z_k == Z_j in the limit: both exceed iff Z >= max threshold.
    return scale * truncated_second_moment(std::max(t_k, t_j));
  }
  if (rho <= -kCoincidentRho) {
    // Z_j == -Z_k: E[-Z^2 1(t_k <= Z <= -t_j)].
    if (-t_j <= t_k) return 0.0;
    const auto segment = [](double z) {
      return std_normal_cdf(z) - z * std_normal_pdf(z);
    };
    return -scale * (segment(-t_j) - segment(t_k));
  }
  return scale * gaussmath::truncated_cross_moment({t_k, t_j, rho});
}

double mean_high() { return 0.0; }

double mean_low(const GPFieldModel& field, const Location& x_k,
                double centered_threshold) {
  const double var_k = field_variance_at(field, x_k);
  const double t = standardize_threshold(centered_threshold, var_k).t_std;
  return std::sqrt(var_k) * std_normal_pdf(t);
}

ObservationMoments assemble_observation_moments(const SensorDeployment& deployment) {
  validate_deployment(deployment);
  const int nh = deployment.n_high();
  const int nl = deployment.n_low();
  const int n = nh + nl;
  const double t_centered = deployment.threshold - deployment.field.mean;
  const GPFieldModel& field = deployment.field;

  ObservationMoments om;
  om.n_high = nh;
  om.corr.resize(n, n);
  om.mean.resize(n);

  for (int i = 0; i < n; ++i) {
    const bool i_high = i < nh;
    const Location& xi =
        i_high ? deployment.high_locs[i] : deployment.low_locs[i - nh];
    om.mean(i) = i_high ? mean_high() : mean_low(field, xi, t_centered);
    for (int j = 0; j <= i; ++j) {
      const bool j_high = j < nh;
      const Location& xj =
          j_high ? deployment.high_locs[j] : deployment.low_locs[j - nh];
      double value;
      if (i_high && j_high) {
        value = corr_high_high(field, xi, xj, i == j, deployment.high_noise_sd);
      } else if (!i_high && j_high) {
        value = corr_high_low(field, xj, xi, t_centered);
      } else {  // both low
        value = (i == j) ? corr_low_auto(field, deployment.energy,
                                         deployment.link, xi, t_centered)
                         : corr_low_low(field, xi, xj, t_centered);
      }
      om.corr(i, j) = value;
      om.corr(j, i) = value;
    }
  }
  return om;
}

void fill_cross_vector(const SensorDeployment& deployment, const Location& x_star,
                       Eigen::VectorXd& cross, double& prior_var) {
  const int nh = deployment.n_high();
  const int nl = deployment.n_low();
  const double t_centered = deployment.threshold - deployment.field.mean;
  const GPFieldModel& field = deployment.field;

  cross.resize(nh + nl);
  for (int k = 0; k < nh; ++k) {
    cross(k) = cross_corr_high(field, x_star, deployment.high_locs[k]);
  }
  for (int k = 0; k < nl; ++k) {
    cross(nh + k) =
        cross_corr_low(field, x_star, deployment.low_locs[k], t_centered);
  }
  prior_var = kernel_eval(field.kernel, x_star, x_star);
}

MomentSet assemble_moments(const SensorDeployment& deployment,
                           const Location& x_star) {
  ObservationMoments om = assemble_observation_moments(deployment);
  MomentSet ms;
  ms.corr = std::move(om.corr);
  ms.mean = std::move(om.mean);
  ms.n_high = om.n_high;
  ms.query_loc = x_star;
  fill_cross_vector(deployment, x_star, ms.cross, ms.prior_var);
  return ms;
}

MomentSet prior_only_moments(const GPFieldModel& field, const Location& x_star) {
  MomentSet ms;
  ms.cross.resize(0);
  ms.corr.resize(0, 0);
  ms.mean.resize(0);
  ms.prior_var = kernel_eval(field.kernel, x_star, x_star);
  ms.query_loc = x_star;
  return ms;
}

}  // namespace sblue
