#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "sblue/errors.hpp"
#include "sblue/field_model.hpp"

using namespace sblue;

TEST_CASE("squared exponential kernel") {
  const KernelSpec se = SquaredExponential{10.0, 1.0};
  CHECK(kernel_eval(se, {1.2, -3.0}, {1.2, -3.0}) == 10.0);
  CHECK(kernel_eval(se, {0, 0}, {100, 0}) <= 1e-12);
  CHECK(kernel_eval(se, {0, 0}, {1, 0}) == doctest::Approx(10.0 * std::exp(-0.5)));
  // symmetry
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    const Location a{u(rng), u(rng)}, b{u(rng), u(rng)};
    CHECK(kernel_eval(se, a, b) == kernel_eval(se, b, a));
  }
}

TEST_CASE("separable exponential kernel") {
  const KernelSpec sep = SeparableExponential{0.1, 0.5, 10.0, 0.1};
  CHECK(kernel_eval(sep, {2, 3}, {2, 3}) == doctest::Approx(1.0));
  CHECK(kernel_eval(sep, {0, 0}, {0.5, 0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel_eval(sep, {0, 0}, {0, 0.1}) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(validate_kernel(SquaredExponential{-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_kernel(SquaredExponential{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_kernel(SeparableExponential{1, 1, 0, 1}), std::invalid_argument);
  CHECK_NOTHROW(validate_kernel(SquaredExponential{10, 1}));
}

TEST_CASE("covariance matrix shapes and spectrum") {
  const KernelSpec se = SquaredExponential{10.0, 1.0};
  const std::vector<Location> one{{0, 0}};
  const Eigen::MatrixXd m1 = covariance_matrix(se, one);
  CHECK(m1.rows() == 1);
  CHECK(m1(0, 0) == 10.0);

  const std::vector<Location> dup{{1, 1}, {1, 1}};
  const Eigen::MatrixXd m2 = covariance_matrix(se, dup);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(m2);
  CHECK(es2.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es2.eigenvalues()(1) == doctest::Approx(20.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 5);
  std::vector<Location> locs;
  for (int i = 0; i < 5; ++i) locs.push_back({u(rng), u(rng)});
  const Eigen::MatrixXd m5 = covariance_matrix(se, locs);
  CHECK((m5 - m5.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es5(m5);
  CHECK(es5.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("sample_gp determinism and moments") {
  const GPFieldModel model{0.0, SquaredExponential{10.0, 1.0}};
  const std::vector<Location> loc{{0.5, 0.5}};

  std::mt19937_64 a(42), b(42);
  const auto draw_a = sample_gp(model, loc, a);
  const auto draw_b = sample_gp(model, loc, b);
  CHECK(draw_a == draw_b);

  constexpr int kDraws = 100000;
  std::mt19937_64 rng(123);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double v = sample_gp(model, loc, rng)[0];
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(10.0 / kDraws));
  CHECK(var == doctest::Approx(10.0).epsilon(0.03));
}

TEST_CASE("paired draws reproduce the kernel covariance") {
  const GPFieldModel model{0.0, SquaredExponential{10.0, 1.0}};
  const std::vector<Location> locs{{0, 0}, {1, 0}};
  const double expected = kernel_eval(model.kernel, locs[0], locs[1]);

  constexpr int kDraws = 100000;
  std::mt19937_64 rng(99);
  double s1 = 0, s2 = 0, s12 = 0, s12_sq = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto v = sample_gp(model, locs, rng);
    s1 += v[0];
    s2 += v[1];
    s12 += v[0] * v[1];
    s12_sq += v[0] * v[1] * v[0] * v[1];
  }
  const double cov = s12 / kDraws - (s1 / kDraws) * (s2 / kDraws);
  const double prod_var = s12_sq / kDraws - (s12 / kDraws) * (s12 / kDraws);
  CHECK(std::abs(cov - expected) <= 4.0 * std::sqrt(prod_var / kDraws));
}

TEST_CASE("nearly coincident locations stay close after jitter") {
  const GPFieldModel model{0.0, SquaredExponential{10.0, 1.0}};
  const std::vector<Location> locs{{1.0, 1.0}, {1.0 + 1e-9, 1.0}};
  std::mt19937_64 rng(5);
  const auto v = sample_gp(model, locs, rng);
  CHECK(std::abs(v[0] - v[1]) < 1e-3 * std::sqrt(10.0));
}

TEST_CASE("sample_lgp positivity and lognormal mean") {
  const LGPEnergyModel model{0.0, SquaredExponential{0.3, 1.0}};
  const std::vector<Location> loc{{2, 2}};

  constexpr int kDraws = 100000;
  std::mt19937_64 rng(321);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double v = sample_lgp(model, loc, rng)[0];
    CHECK(v > 0.0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / kDraws;
  const double sd = std::sqrt(sum_sq / kDraws - mean * mean);
  CHECK(std::abs(mean - std::exp(0.15)) <= 3.0 * sd / std::sqrt(double(kDraws)));
}

TEST_CASE("degenerate kernel variance gives a deterministic energy field") {
  const LGPEnergyModel model{0.7, SquaredExponential{1e-12, 1.0}};
  std::mt19937_64 rng(8);
  const auto v = sample_lgp(model, std::vector<Location>{{0, 0}, {3, 3}}, rng);
  CHECK(v[0] == doctest::Approx(std::exp(0.7)).epsilon(1e-4));
  CHECK(v[1] == doctest::Approx(std::exp(0.7)).epsilon(1e-4));
}

TEST_CASE("noise variance expectation closed forms") {
  const Location x{0, 0};
  const LGPEnergyModel tiny{0.0, SquaredExponential{1e-14, 1.0}};
  CHECK(noise_variance_expectation(tiny, LinkFunction::Reciprocal, x) ==
        doctest::Approx(1.0));

  const LGPEnergyModel m1{0.0, SquaredExponential{0.3, 1.0}};
  CHECK(noise_variance_expectation(m1, LinkFunction::Reciprocal, x) ==
        doctest::Approx(std::exp(0.15)).epsilon(1e-12));

  const LGPEnergyModel m2{1.0, SquaredExponential{0.5, 1.0}};
  CHECK(noise_variance_expectation(m2, LinkFunction::ReciprocalSquare, x) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("noise variance expectation matches Monte Carlo for every link") {
  const Location x{0, 0};
  const LGPEnergyModel model{0.4, SquaredExponential{0.3, 1.0}};
  constexpr int kDraws = 400000;

  for (const auto link : {LinkFunction::Reciprocal, LinkFunction::ReciprocalSquare,
                          LinkFunction::ExpNegative}) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double g = std::exp(0.4 + std::sqrt(0.3) * gauss(rng));
      const double v = link_apply(link, g);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / kDraws;
    const double se = std::sqrt((sum_sq / kDraws - mean * mean) / kDraws);
    const double analytic = noise_variance_expectation(model, link, x);
    CHECK(std::abs(analytic - mean) <= 4.0 * se);
  }
}

TEST_CASE("factorization failure surfaces after the jitter schedule") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(cholesky_with_jitter(bad), FactorizationFailure);
}
