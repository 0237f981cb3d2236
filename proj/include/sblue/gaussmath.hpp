#pragma once

#include <cmath>
#include <stdexcept>

namespace sblue::gaussmath {

/// Truncation corner and correlation of a standardized bivariate normal.
/// Describes the region [a, inf) x [b, inf) over which truncated quantities
/// are evaluated.
struct StandardizedPair {
  double a;
  double b;
  double rho;

  StandardizedPair(double a_, double b_, double rho_) : a(a_), b(b_), rho(rho_) {
    if (!(std::abs(rho) < 1.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("StandardizedPair requires finite a, b and |rho| < 1");
    }
  }
};

/// Standard normal density.
double std_normal_pdf(double z);

/// Standard normal distribution function, accurate to ~1e-16 absolute.
double std_normal_cdf(double z);

/// Probabilists' Hermite polynomial He_n(z) by three-term recurrence.
double hermite_he(int n, double z);

/// Standard bivariate normal density at (a, b) with correlation rho.
double bivariate_pdf(const StandardizedPair& p);

/// Joint upper-orthant probability Pr(Z1 >= a and Z2 >= b).
///
/// Evaluated by a Hermite series expansion for moderate correlation and by
/// iterated adaptive quadrature near |rho| = 1. Throws NonConvergence when
/// neither route reaches tolerance.
double joint_ccdf(const StandardizedPair& p);

/// Unnormalized truncated cross moment
///   E[Z1 Z2 1(Z1 >= a, Z2 >= b)]
/// of the standardized bivariate normal. Not divided by the orthant mass;
/// callers needing a conditional moment divide by joint_ccdf themselves.
double truncated_cross_moment(const StandardizedPair& p);

}  // namespace sblue::gaussmath
