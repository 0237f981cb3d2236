#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sblue::oracle {

/// One reference comparison: an analytic value against an independent route
/// (Monte Carlo or deterministic quadrature).
struct OracleCheck {
  std::string name;
  double analytic = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct OracleOptions {
  long mc_samples = 1'000'000;
  std::uint64_t seed = 20260808;
  /// Test hook: evaluates the low-sensor auto-moment with the noise term's
  /// log-mean sign flipped, which a correct Monte Carlo must reject.
  bool flip_noise_sign = false;
};

/// Closed-form identities and Gauss-Legendre quadrature checks for the
/// bivariate truncated-normal machinery. Deterministic.
std::vector<OracleCheck> run_gaussmath_oracles();

/// Monte Carlo validation of every observation-moment formula on a grid of
/// thresholds and sensor separations, plus deterministic quadrature for the
/// low-low cross moment. Tolerances are 4 Monte Carlo standard errors,
/// recomputed from the requested sample count.
std::vector<OracleCheck> run_moment_oracles(const OracleOptions& options);

/// Tensor Gauss-Legendre integral of z1^p1 z2^p2 over the upper orthant
/// [a,inf) x [b,inf) of the standardized bivariate normal. Independent of the
/// series/adaptive-quadrature implementation paths.
double gl_orthant_integral(int p1, int p2, double a, double b, double rho);

bool all_pass(const std::vector<OracleCheck>& checks);

}  // namespace sblue::oracle
