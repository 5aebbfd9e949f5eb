#pragma once

// Reference computations for the tests, kept independent of the library's
// quadrature and profile trees.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on a finite interval.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Integral over [a, inf) for a > 0 through x = a / u.
inline double simpson_to_inf(const std::function<double(double)>& f, double a, double tol = 1e-12) {
  return simpson(
      [&](double u) {
        if (u == 0.0) return 0.0;
        return f(a / u) * a / (u * u);
      },
      0.0, 1.0, tol);
}

/// Mean of g over the boundary of the Euclidean disc |z - c| < R against the
/// harmonic measure seen from a (Poisson kernel), by the trapezoid rule.
inline double harmonic_mean(std::complex<double> c, double R, std::complex<double> a,
                            const std::function<double(std::complex<double>)>& g, int points = 8192) {
  const double d2 = std::norm(a - c);
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double th = 2.0 * M_PI * k / points;
    const std::complex<double> z = c + R * std::polar(1.0, th);
    sum += (R * R - d2) / std::norm(z - a) * g(z);
  }
  return sum / points;
}

}  // namespace oracle
