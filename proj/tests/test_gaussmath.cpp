#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sblue/errors.hpp"
#include "sblue/gaussmath.hpp"
#include "sblue/oracle.hpp"

using namespace sblue::gaussmath;

namespace {
bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("standard normal pdf") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(std_normal_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-15));
  CHECK(std_normal_pdf(-1.0) == std_normal_pdf(1.0));
  CHECK(std_normal_pdf(26.0) > 0.0);
}

TEST_CASE("standard normal cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(close(std_normal_cdf(8.0), 1.0, 1e-15));
  CHECK(close(std_normal_cdf(1.96), 0.9750021048517795, 1e-15));
  // monotone
  double prev = 0.0;
  for (double z = -6.0; z <= 6.0; z += 0.25) {
    const double v = std_normal_cdf(z);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("Hermite polynomials") {
  CHECK(hermite_he(0, 3.7) == 1.0);
  CHECK(hermite_he(1, 3.7) == 3.7);
  CHECK(hermite_he(3, 2.0) == 2.0);  // z^3 - 3z at z=2
  CHECK(hermite_he(2, 1.5) == doctest::Approx(1.25));
  CHECK_THROWS_AS(hermite_he(-1, 0.0), std::invalid_argument);
}

TEST_CASE("bivariate density") {
  CHECK(bivariate_pdf({0, 0, 0}) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-15));
  CHECK(bivariate_pdf({0, 0, 0.5}) ==
        doctest::Approx(1.0 / (2.0 * M_PI * std::sqrt(0.75))).epsilon(1e-15));
  CHECK(bivariate_pdf({1, -1, 0.3}) ==
        doctest::Approx(0.039983310267730256).epsilon(1e-13));
}

TEST_CASE("StandardizedPair validation") {
  CHECK_THROWS_AS(StandardizedPair(0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(StandardizedPair(0, 0, -1.2), std::invalid_argument);
  CHECK_THROWS_AS(StandardizedPair(std::nan(""), 0, 0.2), std::invalid_argument);
}

TEST_CASE("joint ccdf basics") {
  CHECK(close(joint_ccdf({0, 0, 0}), 0.25, 1e-14));
  CHECK(close(joint_ccdf({1, -1, 0}),
              (1.0 - std_normal_cdf(1.0)) * (1.0 - std_normal_cdf(-1.0)), 1e-14));
  // orthant identity, both the series and fallback regimes
  for (const double rho : {-0.99, -0.9, -0.5, 0.0, 0.5, 0.9, 0.97}) {
    const double exact = 0.25 + std::asin(rho) / (2.0 * M_PI);
    CHECK(close(joint_ccdf({0, 0, rho}), exact, 1e-9));
  }
}

TEST_CASE("joint ccdf symmetry and monotonicity") {
  const double grid[] = {-2.0, -0.7, 0.0, 1.3, 2.0};
  for (const double a : grid) {
    for (const double b : grid) {
      for (const double rho : {-0.8, 0.0, 0.6}) {
        CHECK(joint_ccdf({a, b, rho}) == doctest::Approx(joint_ccdf({b, a, rho})));
      }
    }
  }
  for (const double rho : {-0.8, 0.0, 0.6}) {
    double prev = 1.0;
    for (double a = -3.0; a <= 3.0; a += 0.5) {
      const double v = joint_ccdf({a, 0.4, rho});
      CHECK(v <= prev + 1e-14);
      prev = v;
    }
  }
}

TEST_CASE("truncated cross moment at zero correlation factorizes") {
  CHECK(close(truncated_cross_moment({0, 0, 0}), 1.0 / (2.0 * M_PI), 1e-14));
  for (const double a : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
    for (const double b : {-1.5, 0.0, 1.0}) {
      CHECK(close(truncated_cross_moment({a, b, 0}),
                  std_normal_pdf(a) * std_normal_pdf(b), 1e-12));
    }
  }
}

TEST_CASE("truncated cross moment against quadrature") {
  CHECK(close(truncated_cross_moment({0.5, -0.5, 0.6}), 0.3101537158792935, 1e-8));
  for (const double a : {-2.0, 0.0, 2.0}) {
    for (const double b : {-1.0, 1.0}) {
      for (const double rho : {-0.9, -0.5, 0.5, 0.9}) {
        const double quad = sblue::oracle::gl_orthant_integral(1, 1, a, b, rho);
        CHECK(close(truncated_cross_moment({a, b, rho}), quad, 1e-8));
      }
    }
  }
}

TEST_CASE("full-plane limit recovers the untruncated correlation") {
  for (const double rho : {-0.7, 0.3, 0.9}) {
    CHECK(close(truncated_cross_moment({-9.5, -9.5, rho}), rho, 1e-9));
  }
}

TEST_CASE("quadrature fallback agrees with the series near the route switch") {
  // 0.94 runs through the series, 0.96 through the fallback; both must agree
  // with the independent Gauss-Legendre reference.
  for (const double rho : {0.94, 0.96}) {
    const double ref = sblue::oracle::gl_orthant_integral(0, 0, 0.3, -0.4, rho);
    CHECK(close(joint_ccdf({0.3, -0.4, rho}), ref, 1e-9));
  }
}
