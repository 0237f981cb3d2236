#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

namespace sblue::detail {

// 12-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 12> kGL12Nodes = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
inline constexpr std::array<double, 12> kGL12Weights = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

// Composite fixed-order Gauss-Legendre. The evaluation structure depends only
// on the interval and panel bound, never on the integrand values, so the
// result varies smoothly with parameters (unlike an adaptive rule, whose
// refinement pattern can switch discontinuously).
template <class F>
double fixed_gauss_legendre(const F& f, double a, double b, double max_panel) {
  if (!(b > a)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double panel_sum = 0.0;
    for (size_t i = 0; i < kGL12Nodes.size(); ++i) {
      panel_sum += kGL12Weights[i] * f(mid + 0.5 * h * kGL12Nodes[i]);
    }
    total += 0.5 * h * panel_sum;
  }
  return total;
}

// Adaptive Simpson with Richardson extrapolation. `ok` is cleared when the
// depth limit is reached before the local error estimate meets tolerance.
// Refinements within rounding noise of the panel magnitude are accepted, so
// a tolerance below the double noise floor cannot exhaust the depth budget.
template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fb,
                   double fc, double whole, double tol, int depth, bool& ok) {
  const double c = 0.5 * (a + b);
  const double lm = 0.5 * (a + c);
  const double rm = 0.5 * (c + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (c - a) / 6.0 * (fa + 4.0 * flm + fc);
  const double right = (b - c) / 6.0 * (fc + 4.0 * frm + fb);
  const double delta = left + right - whole;
  const double noise_floor = 1e-14 * (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise_floor) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    ok = false;
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, c, fa, fc, flm, left, 0.5 * tol, depth - 1, ok) +
         simpson_rec(f, c, b, fc, fb, frm, right, 0.5 * tol, depth - 1, ok);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, bool& ok,
                        int initial_panels = 8, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  // Pre-split so narrow features cannot slip between the first sample points.
  const double h = (b - a) / initial_panels;
  double total = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == initial_panels) ? b : lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_rec(f, lo, hi, flo, fhi, fmid, whole,
                         tol / initial_panels, max_depth, ok);
  }
  return total;
}

}  // namespace sblue::detail
