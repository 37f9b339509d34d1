#pragma once

// Generic numeric building blocks: differentiation, adaptive quadrature,
// root bracketing, and the normal quantile / Wilson interval pair used by
// the simulation module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "sysrel/common.hpp"

namespace sysrel {

/// Step policy for numeric differentiation of cumulative hazards.
inline double diff_step(double t) { return std::max(1e-5, 1e-4 * t); }

/// Derivative of f at t: central difference with one Richardson step.
template <typename F>
double derivative(F&& f, double t) {
  const double h = diff_step(t);
  const auto central = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

namespace detail {

template <typename F>
double simpson_recurse(F& f, double a, double m, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw IntegrationFailure("adaptive Simpson: depth limit reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

/// Integrate f over [a, b] (0 < a < b) with the substitution u = exp(x).
/// Tames power-law behaviour near the left endpoint.
template <typename F>
double integrate_log_axis(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (!(a > 0.0) || !(b > a)) return 0.0;
  auto g = [&](double x) {
    const double u = std::exp(x);
    return f(u) * u;
  };
  return adaptive_simpson(g, std::log(a), std::log(b), tol, max_depth);
}

/// Locate a sign change of f inside [lo, hi] to relative width rel_tol.
/// Requires f(lo) and f(hi) of opposite (nonzero) sign.
template <typename F>
double bisect_sign_change(F&& f, double lo, double hi, double rel_tol = 1e-6) {
  double flo = f(lo);
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(1.0, 0.5 * (lo + hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile requires p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;
  double q, r, x;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the CDF tightens the tails.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion at confidence `level`.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double level) {
  if (trials == 0) throw DomainError("wilson_interval requires trials >= 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must be in (0,1)");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace sysrel
