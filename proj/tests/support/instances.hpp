#pragma once

// Shared fixtures for the selection examples and acceptance runs.

#include <random>

#include "sblue/sensors.hpp"

namespace sblue::testing {

// Reference selection instance: 5 high + 10 low sensors in [0,5]^2, SE(10,1)
// field with mu_f = 8, T = 8 (so the standardized threshold is 0), sigma_w=1,
// energy variance 0.3, costs w_h=150 / w_l=30, query location (3.5, 3.1).
// The default geometry seed gives exhaustive optima that vary across the
// benchmark epsilon range {5.4..6.2} and mix both networks
// (costs 180, 180, 150, 120, 60).
inline SensorDeployment selection_instance(std::uint64_t geometry_seed = 15) {
  SensorDeployment d;
  d.field = {8.0, SquaredExponential{10.0, 1.0}};
  d.energy = {0.0, SquaredExponential{0.3, 1.0}};
  d.threshold = 8.0;
  d.high_noise_sd = 1.0;
  std::mt19937_64 rng(geometry_seed);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 5; ++i) {
    const double x = u(rng);
    d.high_locs.push_back({x, u(rng)});
  }
  for (int i = 0; i < 10; ++i) {
    const double x = u(rng);
    d.low_locs.push_back({x, u(rng)});
  }
  return d;
}

}  // namespace sblue::testing
