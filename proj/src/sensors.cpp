#include "sblue/sensors.hpp"

#include <cmath>
#include <stdexcept>

#include "sblue/errors.hpp"

namespace sblue {

void validate_deployment(const SensorDeployment& deployment) {
  if (deployment.n_total() < 1) {
    throw std::invalid_argument("deployment requires at least one sensor");
  }
  if (!(deployment.high_noise_sd > 0.0)) {
    throw std::invalid_argument("high-quality noise sd must be positive");
  }
  validate_kernel(deployment.field.kernel);
  validate_kernel(deployment.energy.log_kernel);
}

std::vector<double> observe_high(std::span<const double> f_at_high,
                                 const SensorDeployment& deployment,
                                 std::mt19937_64& rng) {
  if (f_at_high.size() != deployment.high_locs.size()) {
    throw ShapeMismatch("observe_high: field values do not match high sensor count");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> y(f_at_high.size());
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = f_at_high[i] + deployment.high_noise_sd * gauss(rng);
  }
  return y;
}

std::vector<double> observe_low(std::span<const double> f_at_low,
                                std::span<const double> g_at_low,
                                const SensorDeployment& deployment,
                                std::mt19937_64& rng) {
  if (f_at_low.size() != deployment.low_locs.size() ||
      g_at_low.size() != deployment.low_locs.size()) {
    throw ShapeMismatch("observe_low: field/energy values do not match low sensor count");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> y(f_at_low.size());
  const double baseline = deployment.field.mean;
  for (size_t i = 0; i < y.size(); ++i) {
    const double noise_sd = std::sqrt(link_apply(deployment.link, g_at_low[i]));
    const double v = noise_sd * gauss(rng);
    // Inactive sensors rest at the known field baseline, so readings centered
    // by the field mean follow the zero-mean model exactly (signal + noise
    // when active, pure noise when not).
    y[i] = (f_at_low[i] >= deployment.threshold) ? f_at_low[i] + v : baseline + v;
  }
  return y;
}

ObservationVector center_observations(ObservationVector obs, double mu_f) {
  if (obs.centered) {
    throw DoubleCentering("observation vector is already centered");
  }
  for (double& v : obs.y_high) v -= mu_f;
  for (double& v : obs.y_low) v -= mu_f;
  obs.centered = true;
  return obs;
}

}  // namespace sblue
