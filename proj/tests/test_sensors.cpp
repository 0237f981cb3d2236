#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sblue/errors.hpp"
#include "sblue/sensors.hpp"

using namespace sblue;

namespace {

SensorDeployment make_deployment(int n_high, int n_low, double threshold,
                                 double sigma_w = 1.0) {
  SensorDeployment d;
  for (int i = 0; i < n_high; ++i) d.high_locs.push_back({double(i), 0.0});
  for (int i = 0; i < n_low; ++i) d.low_locs.push_back({double(i), 1.0});
  d.threshold = threshold;
  d.high_noise_sd = sigma_w;
  d.field = {0.0, SquaredExponential{10.0, 1.0}};
  d.energy = {0.0, SquaredExponential{0.3, 1.0}};
  return d;
}

}  // namespace

TEST_CASE("deployment validation") {
  CHECK_THROWS_AS(validate_deployment(make_deployment(0, 0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate_deployment(make_deployment(1, 0, 0.0, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(validate_deployment(make_deployment(0, 1, 0.0)));
}

TEST_CASE("high observations in the noiseless limit") {
  const auto d = make_deployment(3, 0, 0.0, 1e-300);
  std::mt19937_64 rng(1);
  const std::vector<double> f{1.5, -2.0, 0.25};
  CHECK(observe_high(f, d, rng) == f);
}

TEST_CASE("high observation noise variance") {
  const auto d = make_deployment(1, 0, 0.0, 2.0);
  std::mt19937_64 rng(7);
  constexpr int kReps = 100000;
  double sum = 0.0, sum_sq = 0.0;
  const std::vector<double> f{0.0};
  for (int i = 0; i < kReps; ++i) {
    const double y = observe_high(f, d, rng)[0];
    sum += y;
    sum_sq += y * y;
  }
  const double var = sum_sq / kReps - (sum / kReps) * (sum / kReps);
  CHECK(var == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("observations are reproducible under a fixed seed") {
  const auto d = make_deployment(2, 2, 0.5);
  const std::vector<double> f{1.0, 2.0};
  const std::vector<double> g{1.0, 2.0};
  std::mt19937_64 a(55), b(55);
  CHECK(observe_high(f, d, a) == observe_high(f, d, b));
  std::mt19937_64 c(56), e(56);
  CHECK(observe_low(f, g, d, c) == observe_low(f, g, d, e));
}

TEST_CASE("low observations: degenerate no-threshold, no-noise limit") {
  auto d = make_deployment(0, 2, -1e9);
  std::mt19937_64 rng(3);
  const std::vector<double> f{4.0, -7.5};
  const std::vector<double> g{1e300, 1e300};  // reciprocal link -> sd 1e-150
  const auto y = observe_low(f, g, d, rng);
  CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(-7.5).epsilon(1e-12));
}

TEST_CASE("low observations below threshold are pure noise") {
  auto d = make_deployment(0, 1, 100.0);
  std::mt19937_64 rng(9);
  constexpr int kReps = 100000;
  const std::vector<double> f{5.0};  // below threshold
  const std::vector<double> g{2.0};
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kReps; ++i) {
    const double y = observe_low(f, g, d, rng)[0];
    sum += y;
    sum_sq += y * y;
  }
  const double mean = sum / kReps;
  const double se = std::sqrt((sum_sq / kReps - mean * mean) / kReps);
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("threshold ties count as active") {
  auto d = make_deployment(0, 1, 3.0);
  std::mt19937_64 rng(4);
  const std::vector<double> f{3.0};          // exactly at threshold
  const std::vector<double> g{1e300};        // noiseless
  CHECK(observe_low(f, g, d, rng)[0] == doctest::Approx(3.0));
}

TEST_CASE("inactive sensors rest at the field baseline") {
  auto d = make_deployment(0, 2, 9.0);
  d.field.mean = 8.0;
  std::mt19937_64 rng(21);
  const std::vector<double> f{8.2, 12.0};    // first below T, second above
  const std::vector<double> g{1e300, 1e300}; // noiseless
  const auto y = observe_low(f, g, d, rng);
  CHECK(y[0] == doctest::Approx(8.0));  // baseline, not 0
  CHECK(y[1] == doctest::Approx(12.0));
  // centering by the mean recovers the zero-mean model in both branches
  const auto c = center_observations({{}, y, false}, 8.0);
  CHECK(c.y_low[0] == doctest::Approx(0.0));
  CHECK(c.y_low[1] == doctest::Approx(4.0));
}

TEST_CASE("noise is conditionally independent across sensors given energy") {
  auto d = make_deployment(0, 2, 1e9);  // never active: observations are V
  const std::vector<double> f{0.0, 0.0};
  const std::vector<double> g{0.5, 2.0};  // fixed energy
  std::mt19937_64 rng(12);
  constexpr int kReps = 100000;
  double s1 = 0, s2 = 0, s12 = 0, s12_sq = 0;
  for (int i = 0; i < kReps; ++i) {
    const auto y = observe_low(f, g, d, rng);
    s1 += y[0];
    s2 += y[1];
    s12 += y[0] * y[1];
    s12_sq += y[0] * y[1] * y[0] * y[1];
  }
  const double cross = s12 / kReps - (s1 / kReps) * (s2 / kReps);
  const double se = std::sqrt((s12_sq / kReps - (s12 / kReps) * (s12 / kReps)) / kReps);
  CHECK(std::abs(cross) <= 4.0 * se);
}

TEST_CASE("unconditional noise variance matches the link expectation") {
  auto d = make_deployment(0, 1, 1e9);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr int kReps = 200000;
  double sum_sq = 0.0, sum_4 = 0.0;
  for (int i = 0; i < kReps; ++i) {
    const double g = std::exp(std::sqrt(0.3) * gauss(rng));
    const auto y = observe_low(std::vector<double>{0.0}, std::vector<double>{g}, d, rng);
    sum_sq += y[0] * y[0];
    sum_4 += y[0] * y[0] * y[0] * y[0];
  }
  const double var = sum_sq / kReps;
  const double se = std::sqrt((sum_4 / kReps - var * var) / kReps);
  const double expected = noise_variance_expectation(d.energy, d.link, d.low_locs[0]);
  CHECK(std::abs(var - expected) <= 4.0 * se);
}

TEST_CASE("centering") {
  ObservationVector obs{{9.0, 7.0}, {8.5}, false};
  const auto centered = center_observations(obs, 8.0);
  CHECK(centered.y_high == std::vector<double>{1.0, -1.0});
  CHECK(centered.y_low == std::vector<double>{0.5});
  CHECK(centered.centered);
  CHECK_THROWS_AS(center_observations(centered, 8.0), DoubleCentering);

  // mu_f = 0 is the identity on values but still flips the flag
  ObservationVector zero{{1.0}, {}, false};
  const auto c0 = center_observations(zero, 0.0);
  CHECK(c0.y_high == std::vector<double>{1.0});
  CHECK(c0.centered);
}

TEST_CASE("shape mismatches are rejected") {
  auto d = make_deployment(2, 1, 0.0);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(observe_high(std::vector<double>{1.0}, d, rng), ShapeMismatch);
  CHECK_THROWS_AS(observe_low(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0},
                              d, rng),
                  ShapeMismatch);
}
