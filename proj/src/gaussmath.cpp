#include "sblue/gaussmath.hpp"

#include <algorithm>
#include <cmath>

#include "sblue/detail/quadrature.hpp"
#include "sblue/errors.hpp"

namespace sblue::gaussmath {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;

// Series controls. The envelope test uses Cramer's bound
// |He_n(z)|/sqrt(n!) < 1.09 exp(z^2/4), which makes the geometric tail bound
// valid even where individual terms pass through zeros of He_n.
constexpr int kSeriesMaxTerms = 300;
constexpr double kSeriesTol = 1e-13;
constexpr double kSeriesRhoLimit = 0.95;

// Quadrature window: tail mass beyond 10 standard deviations is negligible.
constexpr double kTailCut = 10.0;

struct SeriesResult {
  double value = 0.0;
  bool converged = false;
};

// Hermite-series part of the orthant probability:
//   sum_{n>=1} rho^n / n! He_{n-1}(a) He_{n-1}(b)
// accumulated with normalized polynomials h_k = He_k / sqrt(k!) so every
// factor stays representable; the raw He_k overflow doubles near n ~ 170.
SeriesResult ccdf_series_tail(double a, double b, double rho) {
  SeriesResult res;
  const double fac = std_normal_pdf(a) * std_normal_pdf(b);
  const double abs_rho = std::abs(rho);
  const double cramer = 1.19 * std::exp(-(a * a + b * b) / 4.0) / (2.0 * M_PI);
  double ha_prev = 0.0, ha = 1.0;  // h_{n-2}, h_{n-1} entering step n
  double hb_prev = 0.0, hb = 1.0;
  double rho_n = 1.0;
  double sum = 0.0;
  for (int n = 1; n <= kSeriesMaxTerms; ++n) {
    rho_n *= rho;
    sum += fac * (rho_n / n) * ha * hb;

    const double next_ha = (a * ha - std::sqrt(double(n - 1)) * ha_prev) / std::sqrt(double(n));
    const double next_hb = (b * hb - std::sqrt(double(n - 1)) * hb_prev) / std::sqrt(double(n));
    ha_prev = ha;
    ha = next_ha;
    hb_prev = hb;
    hb = next_hb;

    const double tail_bound = cramer * std::pow(abs_rho, n + 1) /
                              ((n + 1) * (1.0 - abs_rho));
    if (tail_bound < kSeriesTol * (1.0 + std::abs(sum))) {
      res.value = sum;
      res.converged = true;
      return res;
    }
  }
  res.value = sum;
  return res;
}

// Iterated quadrature of g(z1, z2) * f_Z(z1, z2; rho) over [a, inf) x
// [b, inf): adaptive Simpson outer, fixed Gauss-Legendre inner on the
// conditional density, restricted to the conditional mean +- 9 conditional
// standard deviations (the remainder is below 1e-17 of the outer weight).
// The inner rule must be non-adaptive: its error has to vary smoothly with
// z1 or the outer error estimates never settle.
template <class G>
double orthant_quadrature(const G& g, double a, double b, double rho, double tol) {
  const double lo1 = std::max(a, -kTailCut);
  const double hi1 = lo1 + 2.0 * kTailCut;
  const double lo2 = std::max(b, -kTailCut);
  const double hi2 = lo2 + 2.0 * kTailCut;
  if (lo1 >= hi1 || lo2 >= hi2) return 0.0;

  const double cond_sd = std::sqrt(1.0 - rho * rho);
  const double inv_cond = 1.0 / cond_sd;
  const double norm = kInvSqrt2Pi * inv_cond;

  const auto outer = [&](double z1) {
    const double w1 = std_normal_pdf(z1);
    if (w1 < 1e-300) return 0.0;
    const double mean2 = rho * z1;
    const double l2 = std::max(lo2, mean2 - 9.0 * cond_sd);
    const double h2 = std::min(hi2, mean2 + 9.0 * cond_sd);
    if (l2 >= h2) return 0.0;
    const auto inner = [&](double z2) {
      const double u = (z2 - mean2) * inv_cond;
      return g(z1, z2) * norm * std::exp(-0.5 * u * u);
    };
    return w1 * detail::fixed_gauss_legendre(inner, l2, h2, 0.75 * cond_sd);
  };

  bool ok = true;
  const double result =
      detail::adaptive_simpson(outer, lo1, hi1, tol, ok, 16);
  if (!ok) {
    throw NonConvergence("bivariate orthant quadrature did not reach tolerance");
  }
  return result;
}

}  // namespace

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double hermite_he(int n, double z) {
  if (n < 0) throw std::invalid_argument("hermite_he: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = z;
  for (int k = 1; k < n; ++k) {
    const double next = z * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double bivariate_pdf(const StandardizedPair& p) {
  const double d = 1.0 - p.rho * p.rho;
  const double q = (p.a * p.a - 2.0 * p.rho * p.a * p.b + p.b * p.b) / (2.0 * d);
  return std::exp(-q) / (2.0 * M_PI * std::sqrt(d));
}

double joint_ccdf(const StandardizedPair& p) {
  if (std::abs(p.rho) <= kSeriesRhoLimit) {
    const SeriesResult s = ccdf_series_tail(p.a, p.b, p.rho);
    if (s.converged) {
      const double base =
          (1.0 - std_normal_cdf(p.a)) * (1.0 - std_normal_cdf(p.b));
      return std::clamp(base + s.value, 0.0, 1.0);
    }
  }
  const double v = orthant_quadrature(
      [](double, double) { return 1.0; }, p.a, p.b, p.rho, 1e-12);
  return std::clamp(v, 0.0, 1.0);
}

double truncated_cross_moment(const StandardizedPair& p) {
  if (std::abs(p.rho) <= kSeriesRhoLimit) {
    const SeriesResult s = ccdf_series_tail(p.a, p.b, p.rho);
    if (s.converged) {
      const double omega =
          (1.0 - std_normal_cdf(p.a)) * (1.0 - std_normal_cdf(p.b)) + s.value;
      const double denom = std::sqrt(1.0 - p.rho * p.rho);
      const double upper_a = (p.b - p.rho * p.a) / denom;
      const double upper_b = (p.a - p.rho * p.b) / denom;
      return p.rho * (p.a * std_normal_pdf(p.a) * (1.0 - std_normal_cdf(upper_a)) +
                      p.b * std_normal_pdf(p.b) * (1.0 - std_normal_cdf(upper_b)) +
                      omega) +
             (1.0 - p.rho * p.rho) * bivariate_pdf(p);
    }
  }
  return orthant_quadrature([](double z1, double z2) { return z1 * z2; }, p.a,
                            p.b, p.rho, 1e-11);
}

}  // namespace sblue::gaussmath
