#pragma once

#include <random>
#include <span>
#include <vector>

#include "sblue/field_model.hpp"

namespace sblue {

/// Geometry and noise description of the two networks. High-quality sensors
/// are always active with i.i.d. N(0, sigma_w^2) noise; low-quality sensors
/// report the field only where it exceeds `threshold` and carry
/// energy-driven heteroscedastic noise.
struct SensorDeployment {
  std::vector<Location> high_locs;
  std::vector<Location> low_locs;
  double threshold = 0.0;     // activation threshold, raw field units
  double high_noise_sd = 1.0; // sigma_w
  GPFieldModel field;
  LGPEnergyModel energy;
  LinkFunction link = LinkFunction::Reciprocal;

  int n_high() const { return static_cast<int>(high_locs.size()); }
  int n_low() const { return static_cast<int>(low_locs.size()); }
  int n_total() const { return n_high() + n_low(); }
};

/// Throws std::invalid_argument on an empty deployment or nonpositive sigma_w.
void validate_deployment(const SensorDeployment& deployment);

struct ObservationVector {
  std::vector<double> y_high;
  std::vector<double> y_low;
  bool centered = false;
};

/// High-quality readings: field value plus i.i.d. Gaussian noise.
std::vector<double> observe_high(std::span<const double> f_at_high,
                                 const SensorDeployment& deployment,
                                 std::mt19937_64& rng);

/// Low-quality readings. Noise is V = sqrt(psi(g)) * eps with eps i.i.d.
/// standard normal, independent across sensors given the energy field; a
/// sensor reports f + V when f >= threshold (ties active) and rests at the
/// field baseline (mean + V) below, so that mean-centered readings follow
/// the zero-mean observation model in both branches.
std::vector<double> observe_low(std::span<const double> f_at_low,
                                std::span<const double> g_at_low,
                                const SensorDeployment& deployment,
                                std::mt19937_64& rng);

/// Subtracts the known field mean from every entry (both networks) and sets
/// the centered flag. Throws DoubleCentering if already centered.
ObservationVector center_observations(ObservationVector obs, double mu_f);

}  // namespace sblue
