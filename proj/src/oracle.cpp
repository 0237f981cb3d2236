#include "sblue/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "sblue/field_model.hpp"
#include "sblue/gaussmath.hpp"
#include "sblue/moments.hpp"

namespace sblue::oracle {

namespace {

using gaussmath::StandardizedPair;

// Nodes/weights for n-point Gauss-Legendre on [-1, 1], computed by Newton
// iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

struct Axis {
  std::vector<double> points;
  std::vector<double> weights;
};

Axis paneled_axis(double lo, double hi, double panel_width, int order) {
  Axis axis;
  std::vector<double> gn, gw;
  gauss_legendre(order, gn, gw);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double mid = a + 0.5 * h;
    for (int i = 0; i < order; ++i) {
      axis.points.push_back(mid + 0.5 * h * gn[i]);
      axis.weights.push_back(0.5 * h * gw[i]);
    }
  }
  return axis;
}

}  // namespace

double gl_orthant_integral(int p1, int p2, double a, double b, double rho) {
  const double lo1 = std::max(a, -9.0);
  const double lo2 = std::max(b, -9.0);
  if (lo1 >= 9.0 || lo2 >= 9.0) return 0.0;

  const bool tight = std::abs(rho) > 0.95;
  const double width = tight ? 0.25 : 0.5;
  const int order = tight ? 16 : 12;
  const Axis ax1 = paneled_axis(lo1, 9.0, width, order);
  const Axis ax2 = paneled_axis(lo2, 9.0, width, order);

  const double d = 1.0 - rho * rho;
  const double norm = 1.0 / (2.0 * M_PI * std::sqrt(d));
  double total = 0.0;
  for (size_t i = 0; i < ax1.points.size(); ++i) {
    const double z1 = ax1.points[i];
    const double w1 = ax1.weights[i];
    const double m1 = std::pow(z1, p1);
    double row = 0.0;
    for (size_t j = 0; j < ax2.points.size(); ++j) {
      const double z2 = ax2.points[j];
      const double q = (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / (2.0 * d);
      if (q > 90.0) continue;
      row += ax2.weights[j] * std::pow(z2, p2) * std::exp(-q);
    }
    total += w1 * m1 * row;
  }
  return norm * total;
}

bool all_pass(const std::vector<OracleCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.pass; });
}

namespace {

OracleCheck make_check(std::string name, double analytic, double reference,
                       double tolerance) {
  OracleCheck c;
  c.name = std::move(name);
  c.analytic = analytic;
  c.reference = reference;
  c.deviation = std::abs(analytic - reference);
  c.tolerance = tolerance;
  c.pass = c.deviation <= tolerance;
  return c;
}

// Explicit factorial-sum form of He_n, the reference for the recurrence. The
// coefficient n! / (m! (n-2m)! 2^m) is an integer, so it is computed in
// integer arithmetic and both routes are exact at integer arguments.
double hermite_explicit(int n, double z) {
  const auto factorial = [](int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  double sum = 0.0;
  for (int m = 0; m <= n / 2; ++m) {
    const long long coeff =
        factorial(n) / (factorial(m) * factorial(n - 2 * m) * (1ll << m));
    double zpow = 1.0;
    for (int k = 0; k < n - 2 * m; ++k) zpow *= z;
    sum += ((m % 2 == 0) ? 1.0 : -1.0) * static_cast<double>(coeff) * zpow;
  }
  return sum;
}

}  // namespace

std::vector<OracleCheck> run_gaussmath_oracles() {
  std::vector<OracleCheck> checks;
  using gaussmath::joint_ccdf;
  using gaussmath::std_normal_pdf;
  using gaussmath::truncated_cross_moment;

  for (const double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const double exact = 0.25 + std::asin(rho) / (2.0 * M_PI);
    checks.push_back(make_check("orthant_identity rho=" + std::to_string(rho),
                                joint_ccdf({0.0, 0.0, rho}), exact, 1e-9));
  }

  for (const double a : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
    for (const double b : {-1.0, 0.0, 1.5}) {
      checks.push_back(make_check(
          "independence_factorization a=" + std::to_string(a) + " b=" + std::to_string(b),
          truncated_cross_moment({a, b, 0.0}),
          std_normal_pdf(a) * std_normal_pdf(b), 1e-12));
    }
  }

  for (const double a : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (const double b : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      for (const double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        checks.push_back(make_check(
            "cross_moment_vs_quadrature a=" + std::to_string(a) +
                " b=" + std::to_string(b) + " rho=" + std::to_string(rho),
            truncated_cross_moment({a, b, rho}),
            gl_orthant_integral(1, 1, a, b, rho), 1e-8));
      }
    }
  }

  // Series path against the independent quadrature near the route switch, and
  // the production fallback beyond it.
  for (const double rho : {0.9, 0.93, -0.93, 0.96, 0.99}) {
    checks.push_back(make_check("ccdf_route_agreement rho=" + std::to_string(rho),
                                joint_ccdf({0.3, -0.4, rho}),
                                gl_orthant_integral(0, 0, 0.3, -0.4, rho), 1e-9));
  }

  for (const double z : {-2.0, 0.0, 1.0, 3.0}) {
    for (int n = 0; n <= 12; ++n) {
      checks.push_back(make_check(
          "hermite_recurrence n=" + std::to_string(n) + " z=" + std::to_string(z),
          gaussmath::hermite_he(n, z), hermite_explicit(n, z), 0.0));
    }
  }
  return checks;
}

std::vector<OracleCheck> run_moment_oracles(const OracleOptions& options) {
  std::vector<OracleCheck> checks;

  // Reference configuration: squared-exponential field, lognormal energy with
  // nonzero log-mean (so a sign error in the noise term cannot hide), unit
  // thermal noise.
  GPFieldModel field{0.0, SquaredExponential{10.0, 1.0}};
  LGPEnergyModel energy{0.4, SquaredExponential{0.3, 1.0}};
  const LinkFunction link = LinkFunction::Reciprocal;
  const double sigma_w = 1.0;
  const double sigma_f = std::sqrt(10.0);

  const Location x_star{0.3, 0.4};
  const Location x_k{0.0, 0.0};

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const long m_samples = options.mc_samples;

  for (const double t_mult : {-5.0, 0.0, 1.0, 2.0}) {
    const double threshold = t_mult * sigma_f;
    for (const double separation : {0.1, 1.0, 3.0}) {
      const Location x_j{separation, 0.0};
      const std::vector<Location> field_locs{x_star, x_k, x_j};
      const std::vector<Location> energy_locs{x_k, x_j};

      const Eigen::MatrixXd lf =
          cholesky_with_jitter(covariance_matrix(field.kernel, field_locs));
      const Eigen::MatrixXd lg =
          cholesky_with_jitter(covariance_matrix(energy.log_kernel, energy_locs));

      // Sample means and variances for each tracked product.
      constexpr int kProducts = 9;
      Eigen::Array<double, kProducts, 1> sum = Eigen::Array<double, kProducts, 1>::Zero();
      Eigen::Array<double, kProducts, 1> sum_sq = sum;

      Eigen::Vector3d zf;
      Eigen::Vector2d zg;
      for (long s = 0; s < m_samples; ++s) {
        zf << gauss(rng), gauss(rng), gauss(rng);
        zg << gauss(rng), gauss(rng);
        const Eigen::Vector3d f = lf * zf;
        const Eigen::Vector2d g_log = lg * zg;
        const double g_k = std::exp(energy.log_mean + g_log(0));
        const double g_j = std::exp(energy.log_mean + g_log(1));

        const double w_k = sigma_w * gauss(rng);
        const double w_j = sigma_w * gauss(rng);
        const double v_k = std::sqrt(link_apply(link, g_k)) * gauss(rng);
        const double v_j = std::sqrt(link_apply(link, g_j)) * gauss(rng);

        const double y_h_k = f(1) + w_k;
        const double y_h_j = f(2) + w_j;
        const double y_l_k = f(1) >= threshold ? f(1) + v_k : v_k;
        const double y_l_j = f(2) >= threshold ? f(2) + v_j : v_j;

        const double products[kProducts] = {
            f(0) * y_h_k,   // cross high
            f(0) * y_l_j,   // cross low
            y_h_k * y_h_k,  // high auto
            y_h_k * y_h_j,  // high-high off-diagonal
            y_h_k * y_l_j,  // high-low
            y_l_k * y_l_k,  // low auto
            y_l_k * y_l_j,  // low-low off-diagonal
            y_l_k,          // low mean
            y_h_k,          // high mean
        };
        for (int p = 0; p < kProducts; ++p) {
          sum(p) += products[p];
          sum_sq(p) += products[p] * products[p];
        }
      }

      const auto mean = sum / double(m_samples);
      const auto variance = (sum_sq / double(m_samples) - mean * mean).max(0.0);
      const auto std_err = (variance / double(m_samples)).sqrt();

      const double noise_term =
          options.flip_noise_sign
              ? std::exp(energy.log_mean +
                         0.5 * kernel_eval(energy.log_kernel, x_k, x_k))
              : noise_variance_expectation(energy, link, x_k);
      const double var_k = kernel_eval(field.kernel, x_k, x_k);
      const double t_k = threshold / std::sqrt(var_k);
      const double field_term =
          var_k * (1.0 - gaussmath::std_normal_cdf(t_k) +
                   t_k * gaussmath::std_normal_pdf(t_k));
      const double low_auto_analytic = field_term + noise_term;

      const double analytic[kProducts] = {
          cross_corr_high(field, x_star, x_k),
          cross_corr_low(field, x_star, x_j, threshold),
          corr_high_high(field, x_k, x_k, true, sigma_w),
          corr_high_high(field, x_k, x_j, false, sigma_w),
          corr_high_low(field, x_k, x_j, threshold),
          low_auto_analytic,
          corr_low_low(field, x_k, x_j, threshold),
          mean_low(field, x_k, threshold),
          mean_high(),
      };
      const char* names[kProducts] = {
          "cross_corr_high", "cross_corr_low",  "corr_high_auto",
          "corr_high_high",  "corr_high_low",   "corr_low_auto",
          "corr_low_low",    "mean_low",        "mean_high",
      };

      const std::string suffix =
          " T=" + std::to_string(threshold) + " sep=" + std::to_string(separation);
      for (int p = 0; p < kProducts; ++p) {
        checks.push_back(make_check(std::string(names[p]) + suffix, analytic[p],
                                    mean(p), 4.0 * std_err(p)));
      }

      // Deterministic second route for the hardest formula.
      const double var_j = kernel_eval(field.kernel, x_j, x_j);
      const double scale = std::sqrt(var_k * var_j);
      const double rho = kernel_eval(field.kernel, x_k, x_j) / scale;
      const double quad = scale * gl_orthant_integral(1, 1, threshold / std::sqrt(var_k),
                                                      threshold / std::sqrt(var_j), rho);
      checks.push_back(make_check("corr_low_low_vs_quadrature" + suffix,
                                  corr_low_low(field, x_k, x_j, threshold), quad,
                                  1e-6));
    }
  }
  return checks;
}

}  // namespace sblue::oracle
